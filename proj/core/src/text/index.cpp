#include "raas/text/index.hpp"

#include "raas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace raas::text {

namespace {

constexpr TermId kStop = ~TermId{0};

template <std::size_t N>
void count_grams(std::vector<std::array<TermId, N>>& all, GramTable<N>& table)
{
    std::sort(all.begin(), all.end());
    table.keys.clear();
    table.df.clear();
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) {
            ++j;
        }
        table.keys.push_back(all[i]);
        table.df.push_back(static_cast<std::uint32_t>(j - i));
        i = j;
    }
    all.clear();
    all.shrink_to_fit();
}

template <std::size_t N>
void collect_doc_grams(const std::vector<std::vector<TermId>>& fields,
                       std::vector<std::array<TermId, N>>& scratch,
                       std::vector<std::array<TermId, N>>& all)
{
    scratch.clear();
    for (const auto& seq : fields) {
        if (seq.size() < N) {
            continue;
        }
        for (std::size_t i = 0; i + N <= seq.size(); ++i) {
            std::array<TermId, N> key{};
            bool ok = true;
            for (std::size_t k = 0; k < N; ++k) {
                key[k] = seq[i + k];
                ok = ok && key[k] != kStop;
            }
            if (ok) {
                scratch.push_back(key);
            }
        }
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    all.insert(all.end(), scratch.begin(), scratch.end());
}

}  // namespace

void ScoringParams::validate() const
{
    if (!(k1 > 0.0) || !std::isfinite(k1)) {
        throw ValidationError("k1 must be positive");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw ValidationError("b must lie in [0, 1]");
    }
}

template <std::size_t N>
std::uint32_t GramTable<N>::lookup(const Key& key) const
{
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) {
        return 0;
    }
    return df[static_cast<std::size_t>(it - keys.begin())];
}

template struct GramTable<2>;
template struct GramTable<3>;

Index Index::build(std::span<const DocumentRecord> docs, const Analyzer& analyzer, ScoringParams params,
                   std::uint64_t version)
{
    if (docs.empty()) {
        throw Error("empty corpus");
    }
    params.validate();

    std::vector<const DocumentRecord*> ordered;
    ordered.reserve(docs.size());
    for (const auto& d : docs) {
        ordered.push_back(&d);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto* a, const auto* b) { return a->doc_id < b->doc_id; });

    // Pass 1: provisional term ids, per-field id sequences (stopwords kept as kStop).
    std::unordered_map<std::string, TermId> provisional;
    std::vector<std::string> provisional_terms;
    std::vector<std::vector<std::vector<TermId>>> doc_fields(ordered.size());
    for (std::size_t d = 0; d < ordered.size(); ++d) {
        const auto& doc = *ordered[d];
        auto add_field = [&](std::string_view text) {
            std::vector<TermId> seq;
            for (auto& raw : analyzer.raw_tokens(text, doc.language)) {
                if (raw.is_stopword) {
                    seq.push_back(kStop);
                    continue;
                }
                auto [it, inserted] = provisional.try_emplace(raw.term, static_cast<TermId>(provisional_terms.size()));
                if (inserted) {
                    provisional_terms.push_back(raw.term);
                }
                seq.push_back(it->second);
            }
            doc_fields[d].push_back(std::move(seq));
        };
        add_field(doc.title);
        if (doc.abstract) {
            add_field(*doc.abstract);
        }
    }
    if (provisional_terms.size() >= kStop) {
        throw Error("vocabulary too large");
    }

    // Final ids in lexicographic order.
    std::vector<TermId> order(provisional_terms.size());
    std::iota(order.begin(), order.end(), TermId{0});
    std::sort(order.begin(), order.end(),
              [&](TermId a, TermId b) { return provisional_terms[a] < provisional_terms[b]; });
    std::vector<TermId> remap(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = static_cast<TermId>(i);
    }
    for (auto& fields : doc_fields) {
        for (auto& seq : fields) {
            for (auto& t : seq) {
                if (t != kStop) {
                    t = remap[t];
                }
            }
        }
    }

    Index index;
    index.m_params = params;
    index.m_version = version;
    index.m_terms.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        index.m_terms[i] = std::move(provisional_terms[order[i]]);
    }
    provisional.clear();

    // Pass 2: per-document term frequencies -> CSR postings.
    const auto n_docs = ordered.size();
    index.m_doc_ids.resize(n_docs);
    index.m_doc_len.resize(n_docs);
    std::vector<std::vector<Posting>> per_doc(n_docs);
    std::vector<std::uint64_t> df(index.m_terms.size(), 0);
    std::vector<TermId> bag;
    for (std::size_t d = 0; d < n_docs; ++d) {
        index.m_doc_ids[d] = ordered[d]->doc_id;
        bag.clear();
        for (const auto& seq : doc_fields[d]) {
            for (auto t : seq) {
                if (t != kStop) {
                    bag.push_back(t);
                }
            }
        }
        index.m_doc_len[d] = static_cast<std::uint32_t>(bag.size());
        std::sort(bag.begin(), bag.end());
        for (std::size_t i = 0; i < bag.size();) {
            std::size_t j = i;
            while (j < bag.size() && bag[j] == bag[i]) {
                ++j;
            }
            per_doc[d].push_back({bag[i], static_cast<std::uint32_t>(j - i)});
            ++df[bag[i]];
            i = j;
        }
    }

    index.m_offsets.assign(index.m_terms.size() + 1, 0);
    for (std::size_t t = 0; t < df.size(); ++t) {
        index.m_offsets[t + 1] = index.m_offsets[t] + df[t];
    }
    index.m_postings.resize(index.m_offsets.back());
    std::vector<std::uint64_t> cursor(index.m_offsets.begin(), index.m_offsets.end() - 1);
    for (std::size_t d = 0; d < n_docs; ++d) {
        for (const auto& p : per_doc[d]) {
            // p.doc holds the term id here; postings store (doc position, tf).
            index.m_postings[cursor[p.doc]++] = Posting{static_cast<std::uint32_t>(d), p.tf};
        }
        per_doc[d].clear();
        per_doc[d].shrink_to_fit();
    }

    std::uint64_t total_len = std::accumulate(index.m_doc_len.begin(), index.m_doc_len.end(), std::uint64_t{0});
    index.m_avg_len = static_cast<double>(total_len) / static_cast<double>(n_docs);

    // Gram document frequencies.
    {
        std::vector<std::array<TermId, 2>> all2, scratch2;
        std::vector<std::array<TermId, 3>> all3, scratch3;
        for (std::size_t d = 0; d < n_docs; ++d) {
            collect_doc_grams<2>(doc_fields[d], scratch2, all2);
            collect_doc_grams<3>(doc_fields[d], scratch3, all3);
            doc_fields[d].clear();
            doc_fields[d].shrink_to_fit();
        }
        count_grams<2>(all2, index.m_bigrams);
        count_grams<3>(all3, index.m_trigrams);
    }

    index.finalize();
    return index;
}

void Index::finalize()
{
    m_term_lookup.clear();
    m_term_lookup.reserve(m_terms.size());
    for (std::size_t i = 0; i < m_terms.size(); ++i) {
        m_term_lookup.emplace(m_terms[i], static_cast<TermId>(i));
    }
    m_position.clear();
    m_position.reserve(m_doc_ids.size());
    for (std::size_t i = 0; i < m_doc_ids.size(); ++i) {
        m_position.emplace(m_doc_ids[i], static_cast<std::uint32_t>(i));
    }

    // An all-stopword corpus has zero mean length; those documents never score.
    const double avg = m_avg_len > 0.0 ? m_avg_len : 1.0;
    m_norm.resize(m_doc_len.size());
    for (std::size_t i = 0; i < m_doc_len.size(); ++i) {
        m_norm[i] = m_params.k1 * (1.0 - m_params.b + m_params.b * static_cast<double>(m_doc_len[i]) / avg);
    }
    m_idf.resize(m_terms.size());
    for (std::size_t t = 0; t < m_terms.size(); ++t) {
        m_idf[t] = idf(df(static_cast<TermId>(t)));
    }
}

std::optional<std::uint32_t> Index::position_of(DocId id) const
{
    auto it = m_position.find(id);
    if (it == m_position.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<TermId> Index::term_id(std::string_view term) const
{
    auto it = m_term_lookup.find(term);
    if (it == m_term_lookup.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::span<const Posting> Index::postings(TermId id) const
{
    return {m_postings.data() + m_offsets[id], static_cast<std::size_t>(m_offsets[id + 1] - m_offsets[id])};
}

std::uint32_t Index::gram_df(std::span<const TermId> gram) const
{
    switch (gram.size()) {
    case 1:
        return gram[0] < m_terms.size() ? df(gram[0]) : 0;
    case 2:
        return m_bigrams.lookup({gram[0], gram[1]});
    case 3:
        return m_trigrams.lookup({gram[0], gram[1], gram[2]});
    default:
        return 0;
    }
}

double Index::idf(std::uint32_t df) const
{
    const auto n = static_cast<double>(doc_count());
    const auto f = static_cast<double>(df);
    return std::log(1.0 + (n - f + 0.5) / (f + 0.5));
}

}  // namespace raas::text
