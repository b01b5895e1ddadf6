#include "raas/recommenders.hpp"

#include "raas/errors.hpp"
#include "raas/text/scoring.hpp"
#include "raas/unicode.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

namespace raas {

namespace {

const char* field_token(text::KeyphraseField f)
{
    switch (f) {
    case text::KeyphraseField::Title:
        return "title";
    case text::KeyphraseField::Abstract:
        return "abstract";
    case text::KeyphraseField::TitleAbstract:
        return "title_abstract";
    }
    return "?";
}

const char* gram_token(text::GramSize g)
{
    switch (g) {
    case text::GramSize::Uni:
        return "1";
    case text::GramSize::Bi:
        return "2";
    case text::GramSize::Tri:
        return "3";
    case text::GramSize::Mixed:
        return "mixed";
    }
    return "?";
}

}  // namespace

std::string cbf_label(const CbfParams& params)
{
    if (params.feature_source == FeatureSource::Terms) {
        return "cbf|terms";
    }
    return std::string("cbf|kp|") + field_token(params.keyphrase_field) + "|" + gram_token(params.gram_size) + "|"
           + std::to_string(params.num_keyphrases);
}

StereotypeList StereotypeList::load(const std::filesystem::path& path, const CorpusSnapshot& corpus,
                                    std::vector<std::string>* skipped)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open stereotype list: " + path.string());
    }
    StereotypeList list;
    std::unordered_set<DocId> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        auto id = unicode::collapse_whitespace(line);
        if (id.empty()) {
            continue;
        }
        const auto* doc = corpus.find_external(id);
        if (doc == nullptr || !seen.insert(doc->doc_id).second) {
            if (skipped != nullptr) {
                skipped->push_back(id);
            }
            continue;
        }
        list.doc_ids.push_back(doc->doc_id);
    }
    return list;
}

PopularityRanking::PopularityRanking(const CorpusSnapshot& corpus,
                                     const std::unordered_map<DocId, std::uint64_t>& readers)
{
    m_ranked.reserve(corpus.size());
    for (const auto& doc : corpus.documents()) {
        auto it = readers.find(doc.doc_id);
        m_ranked.emplace_back(doc.doc_id, it == readers.end() ? 0 : it->second);
    }
    std::sort(m_ranked.begin(), m_ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
}

CandidateList recommend_cbf(const DocumentRecord& source, const CbfParams& params, const text::Index& index,
                            const text::Analyzer& analyzer, std::size_t limit)
{
    std::vector<std::string> query;
    if (params.feature_source == FeatureSource::Terms) {
        for (auto& tok : analyzer.tokenize(source.title, true, source.language)) {
            query.push_back(std::move(tok.term));
        }
        if (source.abstract) {
            for (auto& tok : analyzer.tokenize(*source.abstract, true, source.language)) {
                query.push_back(std::move(tok.term));
            }
        }
    } else {
        auto phrases = text::extract_keyphrases(source, params.keyphrase_field, params.gram_size, index, analyzer);
        auto wanted = static_cast<std::size_t>(std::max(params.num_keyphrases, 0));
        if (phrases.size() < wanted) {
            throw InsufficientKeyphrases(phrases.size(), wanted);
        }
        for (std::size_t i = 0; i < wanted; ++i) {
            for (auto& w : phrases[i].words()) {
                query.push_back(std::move(w));
            }
        }
    }

    CandidateList out;
    out.source = source.doc_id;
    out.producer = cbf_label(params);
    for (const auto& hit : text::score_related(index, query, source.doc_id, limit)) {
        out.items.push_back({hit.doc_id, hit.relevance});
    }
    return out;
}

CandidateList recommend_most_popular(const PopularityRanking& ranking, std::optional<DocId> source,
                                     std::size_t limit)
{
    CandidateList out;
    out.source = source.value_or(0);
    out.producer = "most_popular";
    for (const auto& [id, readers] : ranking.ranked()) {
        if (out.items.size() >= limit) {
            break;
        }
        if (source && id == *source) {
            continue;
        }
        out.items.push_back({id, static_cast<double>(readers)});
    }
    return out;
}

CandidateList recommend_stereotype(const StereotypeList& list, DocId source, std::size_t limit)
{
    if (list.doc_ids.empty()) {
        throw NoStereotypeConfigured();
    }
    CandidateList out;
    out.source = source;
    out.producer = "stereotype";
    for (auto id : list.doc_ids) {
        if (out.items.size() >= limit) {
            break;
        }
        if (id == source) {
            continue;
        }
        out.items.push_back({id, 1.0 / static_cast<double>(out.items.size() + 1)});
    }
    return out;
}

CandidateList recommend_random(const CorpusSnapshot& corpus, DocId source, std::size_t limit, Rng& rng)
{
    CandidateList out;
    out.source = source;
    out.producer = "random";

    const auto& docs = corpus.documents();
    std::optional<std::size_t> source_pos;
    if (const auto* src = corpus.find(source)) {
        source_pos = static_cast<std::size_t>(src - docs.data());
    }
    const std::size_t n = docs.size() - (source_pos ? 1 : 0);
    const std::size_t k = std::min(limit, n);
    // Virtual array of the n eligible positions; sparse Fisher-Yates on it.
    auto eligible = [&](std::size_t i) { return source_pos && i >= *source_pos ? i + 1 : i; };
    std::unordered_map<std::size_t, std::size_t> swapped;
    auto at = [&](std::size_t i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    for (std::size_t i = 0; i < k; ++i) {
        auto j = i + static_cast<std::size_t>(rng.below(n - i));
        auto vi = at(i);
        auto vj = at(j);
        swapped[j] = vi;
        swapped[i] = vj;
        out.items.push_back({docs[eligible(vj)].doc_id, 0.0});
    }
    return out;
}

}  // namespace raas
