#include "raas/bibliometrics/rerank.hpp"

#include "raas/errors.hpp"

#include <algorithm>
#include <cmath>

namespace raas {

void RerankConfig::validate() const
{
    if (k < kMinPool || k > kMaxPool) {
        throw ValidationError("rerank pool size must be in [10, 100], got " + std::to_string(k));
    }
}

const char* metric_token(BiblioMetric m)
{
    switch (m) {
    case BiblioMetric::Plain:
        return "plain";
    case BiblioMetric::ByAge:
        return "age";
    case BiblioMetric::ByAuthors:
        return "authors";
    }
    return "?";
}

const char* combine_token(CombineMode c)
{
    switch (c) {
    case CombineMode::BiblioOnly:
        return "biblio";
    case CombineMode::Multiply:
        return "mult";
    case CombineMode::SumNormalized:
        return "sumnorm";
    }
    return "?";
}

double bibliometric_score(const DocumentRecord& doc, const ReadershipRecord& readership, BiblioMetric metric,
                          int ref_year)
{
    const auto count = static_cast<double>(readership.reader_count);
    switch (metric) {
    case BiblioMetric::Plain:
        return count;
    case BiblioMetric::ByAge: {
        if (!doc.year) {
            return count;
        }
        int age = ref_year - *doc.year + 1;
        return count / static_cast<double>(std::max(1, age));
    }
    case BiblioMetric::ByAuthors: {
        auto real = std::count_if(doc.authors.begin(), doc.authors.end(), [](const AuthorName& a) { return !a.is_noise; });
        return count / static_cast<double>(std::max<std::ptrdiff_t>(1, real));
    }
    }
    return count;
}

namespace {

void normalize(std::vector<double>& v)
{
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double min = *lo;
    double range = *hi - *lo;
    for (auto& x : v) {
        x = range > 0.0 ? (x - min) / range : 0.5;
    }
}

}  // namespace

CandidateList rerank(const CandidateList& candidates, const RerankConfig& config,
                     const std::unordered_map<DocId, double>& scores, std::size_t final_n)
{
    CandidateList out;
    out.source = candidates.source;
    out.producer = candidates.producer;
    const std::size_t pool = std::min(static_cast<std::size_t>(std::max(config.k, 0)), candidates.items.size());
    if (pool == 0 || final_n == 0) {
        return out;
    }

    std::vector<double> rel(pool);
    std::vector<double> bib(pool);
    for (std::size_t i = 0; i < pool; ++i) {
        rel[i] = candidates.items[i].relevance;
        auto it = scores.find(candidates.items[i].doc_id);
        bib[i] = it == scores.end() ? 0.0 : it->second;
    }

    std::vector<double> key(pool);
    switch (config.combine) {
    case CombineMode::BiblioOnly:
        key = bib;
        break;
    case CombineMode::Multiply:
        for (std::size_t i = 0; i < pool; ++i) {
            key[i] = rel[i] * bib[i];
        }
        break;
    case CombineMode::SumNormalized:
        normalize(rel);
        normalize(bib);
        for (std::size_t i = 0; i < pool; ++i) {
            key[i] = rel[i] + bib[i];
        }
        break;
    }

    std::vector<std::size_t> order(pool);
    for (std::size_t i = 0; i < pool; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (key[a] != key[b]) {
            return key[a] > key[b];
        }
        return candidates.items[a].doc_id < candidates.items[b].doc_id;
    });

    const std::size_t n = std::min(final_n, pool);
    out.items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.items.push_back(candidates.items[order[i]]);
    }
    return out;
}

}  // namespace raas
