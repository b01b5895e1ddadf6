#pragma once

#include "raas/sim/targets.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace raas::sim {

/// Click delays are drawn uniformly inside [lo_ms, hi_ms) of a component
/// picked with its probability.
struct DelayComponent {
    std::int64_t lo_ms = 0;
    std::int64_t hi_ms = 1;
    double probability = 1.0;
};

/// Processing time injected into a share of requests (virtual-time targets).
struct LatencyStep {
    std::int64_t processing_ms = 0;
    double weight = 1.0;
};

/// p(click) = base_rate
///          * position_decay ^ (rank - 1)
///          * (1 - latency_decay_per_s) ^ processing_seconds
///          * reshow_multiplier ^ reshow_count
///          * (1 + relevance_slope * normalized_relevance)
///          * max(0, 1 - daily_trend * day_index)
/// clamped to [0, 1]. normalized_relevance is relevance / max relevance in the set.
struct ClickModel {
    double base_rate = 0.01;
    double position_decay = 1.0;
    double latency_decay_per_s = 0.0;
    double reshow_multiplier = 1.0;
    double relevance_slope = 0.0;
    double daily_trend = 0.0;
    std::vector<DelayComponent> delay_mixture{{0, 30'000, 1.0}};
    std::vector<LatencyStep> latency_profile;

    /// Throws ValidationError for out-of-range parameters or a mixture not summing to 1.
    void validate() const;

    [[nodiscard]] double click_probability(int rank, double processing_seconds, std::uint64_t reshow_count,
                                           double normalized_relevance, std::int64_t day_index) const;

    static ClickModel from_json_text(const std::string& text);
    static ClickModel load(const std::filesystem::path& path);
    [[nodiscard]] std::string to_json_text() const;
};

struct SimConfig {
    std::size_t corpus_size = 1000;
    std::size_t num_requests = 1000;
    std::uint64_t seed = 1;
    std::size_t users = 100;
    ClickModel model;
    int count = 10;  // 0: uniform over 1..15 per request
    std::size_t requests_per_day = 10'000;
    std::size_t workers = 1;  // real-time targets only
    UtcMillis start = from_epoch_ms(1'476'748'800'000);  // 2016-10-18T00:00:00Z
    std::size_t source_pool = 0;  // 0: every source id
};

struct BucketExpectation {
    std::uint64_t impressions = 0;
    double expected_clicks = 0.0;

    [[nodiscard]] double expected_ctr() const
    {
        return impressions == 0 ? 0.0 : expected_clicks / static_cast<double>(impressions);
    }
};

struct Manifest {
    SimConfig config;
    std::uint64_t requests = 0;
    std::uint64_t failed_requests = 0;
    std::uint64_t impressions = 0;
    std::uint64_t clicks = 0;  // click decisions, one per clicked impression
    std::uint64_t fallback_sets = 0;
    /// Expected CTR per dimension ("latency", "setsize", "reshow", "day",
    /// "algorithm") and bucket, using the analytics bucket labels.
    std::map<std::string, std::map<std::string, BucketExpectation>> expected;
    std::vector<std::int64_t> processing_times_ms;

    [[nodiscard]] std::string to_json_text() const;
};

/// Drives num_requests related-document requests against the target and
/// clicks per the model. Click randomness for an impression depends only
/// on (seed, rec_id). Throws Error when the target is unreachable.
Manifest simulate_traffic(const SimConfig& config, Target& target, std::span<const std::string> source_ids);

}  // namespace raas::sim
