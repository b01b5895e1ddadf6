#include "raas/text/scoring.hpp"

#include <algorithm>

namespace raas::text {

namespace {

// Per-thread accumulator sized to the largest index seen.
struct Accumulator {
    std::vector<double> score;
    std::vector<std::uint32_t> touched;

    void prepare(std::size_t n)
    {
        if (score.size() < n) {
            score.assign(n, 0.0);
        }
        touched.clear();
    }
};

}  // namespace

std::vector<ScoredDoc> score_related(const Index& index, std::span<const std::string> query_terms,
                                     std::optional<DocId> exclude, std::size_t limit)
{
    if (limit == 0 || index.doc_count() == 0) {
        return {};
    }

    // Distinct known terms in lexicographic (= id) order.
    std::vector<TermId> terms;
    terms.reserve(query_terms.size());
    for (const auto& q : query_terms) {
        if (auto id = index.term_id(q)) {
            terms.push_back(*id);
        }
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    if (terms.empty()) {
        return {};
    }

    thread_local Accumulator acc;
    acc.prepare(index.doc_count());
    const double k1_plus_1 = index.params().k1 + 1.0;

    for (auto t : terms) {
        const double idf = index.term_idf(t);
        for (const auto& p : index.postings(t)) {
            const auto tf = static_cast<double>(p.tf);
            double& s = acc.score[p.doc];
            if (s == 0.0) {
                acc.touched.push_back(p.doc);
            }
            s += idf * (tf * k1_plus_1) / (tf + index.length_norm(p.doc));
        }
    }

    std::optional<std::uint32_t> excluded_pos;
    if (exclude) {
        excluded_pos = index.position_of(*exclude);
    }

    std::vector<ScoredDoc> hits;
    hits.reserve(acc.touched.size());
    for (auto pos : acc.touched) {
        double s = acc.score[pos];
        acc.score[pos] = 0.0;
        if (s > 0.0 && pos != excluded_pos) {
            hits.push_back({index.doc_id(pos), s});
        }
    }

    auto better = [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.relevance != b.relevance) {
            return a.relevance > b.relevance;
        }
        return a.doc_id < b.doc_id;
    };
    if (hits.size() > limit) {
        std::nth_element(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(limit), hits.end(), better);
        hits.resize(limit);
    }
    std::sort(hits.begin(), hits.end(), better);
    return hits;
}

}  // namespace raas::text
