#pragma once

#include "raas/corpus/document.hpp"
#include "raas/text/index.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace raas::text {

struct ScoredDoc {
    DocId doc_id;
    double relevance;

    bool operator==(const ScoredDoc&) const = default;
};

/// Okapi BM25 over the distinct query terms:
///   sum_t idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg_len))
/// Zero-score documents and `exclude` are dropped; results are ordered by
/// descending score, then ascending doc_id, and truncated to `limit`.
std::vector<ScoredDoc> score_related(const Index& index, std::span<const std::string> query_terms,
                                     std::optional<DocId> exclude, std::size_t limit);

}  // namespace raas::text
