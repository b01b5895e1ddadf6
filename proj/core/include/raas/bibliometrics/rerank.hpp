#pragma once

#include "raas/bibliometrics/readership.hpp"
#include "raas/recommenders.hpp"

#include <string>
#include <unordered_map>

namespace raas {

enum class BiblioMetric { Plain, ByAge, ByAuthors };
enum class CombineMode { BiblioOnly, Multiply, SumNormalized };

struct RerankConfig {
    BiblioMetric metric = BiblioMetric::Plain;
    int k = 10;  // candidate pool size, 10..100
    CombineMode combine = CombineMode::BiblioOnly;

    static constexpr int kMinPool = 10;
    static constexpr int kMaxPool = 100;

    /// Throws ValidationError when k is outside [10, 100].
    void validate() const;

    bool operator==(const RerankConfig&) const = default;
};

const char* metric_token(BiblioMetric m);
const char* combine_token(CombineMode c);

/// PLAIN: count. BY_AGE: count / max(1, ref_year - year + 1), divisor 1
/// without a year. BY_AUTHORS: count / max(1, non-noise authors).
double bibliometric_score(const DocumentRecord& doc, const ReadershipRecord& readership, BiblioMetric metric,
                          int ref_year);

/// Re-orders the first min(k, n) candidates and returns the first final_n.
/// Missing scores count as 0. Ties break on ascending doc_id.
CandidateList rerank(const CandidateList& candidates, const RerankConfig& config,
                     const std::unordered_map<DocId, double>& scores, std::size_t final_n);

}  // namespace raas
