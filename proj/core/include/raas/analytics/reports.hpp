#pragma once

#include "raas/analytics/stats.hpp"
#include "raas/service/event_log.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace raas::analytics {

enum class Dimension { Algorithm, ProcessingTime, SetSize, Reshow, Day, RelevanceDecile };

/// CLI names: algorithm, latency, setsize, reshow, day, scorectr.
std::optional<Dimension> parse_dimension(std::string_view name);
const char* dimension_name(Dimension d);

struct CtrRow {
    std::string bucket;
    std::uint64_t impressions = 0;
    std::uint64_t clicks = 0;  // distinct clicked items
    std::optional<double> ctr;
    std::optional<Interval> wilson;
};

struct CtrReport {
    Dimension dimension = Dimension::Algorithm;
    std::vector<CtrRow> rows;
    std::optional<Correlation> spearman;  // RelevanceDecile only

    [[nodiscard]] std::uint64_t total_impressions() const;
    [[nodiscard]] std::uint64_t total_clicks() const;
};

struct ReportOptions {
    /// Reshow only: deliveries within this long of the same (user, doc)
    /// pair's previous delivery are left out of every count.
    std::optional<std::chrono::milliseconds> reshow_delay_filter;
};

/// Buckets per dimension:
///   Algorithm       executed fingerprint, lexicographic
///   ProcessingTime  "0-1s" .. "9-10s", ">10s"
///   SetSize         "1" .. "15" by delivered items
///   Reshow          prior deliveries of the (user, doc) pair, "0" .. max; sets without a user are skipped
///   Day             UTC delivery date
///   RelevanceDecile see score_ctr_correlation
/// An empty log gives zero rows.
CtrReport ctr_report(const LogSnapshot& log, Dimension dimension, const ReportOptions& options = {});

struct DelayBucket {
    std::string label;
    std::uint64_t count = 0;
    double fraction = 0.0;
};

struct DelayHistogram {
    std::vector<DelayBucket> buckets;  // <30s, 30s-5min, 5min-1h, 1h-1d, 1d-5d, >5d
    std::uint64_t total = 0;
};

/// Every click event, bucketed by delay.
DelayHistogram click_delay_histogram(const LogSnapshot& log);

struct TimeSeriesPoint {
    std::string day;
    std::uint64_t impressions = 0;
    std::uint64_t clicks = 0;
    double ctr = 0.0;
};

struct TimeSeries {
    std::vector<TimeSeriesPoint> points;
    Correlation trend;  // Spearman of day number against CTR
};

/// One point per UTC day with impressions; empty days are absent.
TimeSeries ctr_time_series(const LogSnapshot& log);

/// Items delivered by content-based recipes, bucketed into deciles of their
/// relevance ("d1" lowest .. "d10"), with the Spearman correlation of decile
/// index against decile CTR. Throws InsufficientData when fewer than 10
/// distinct relevance values exist.
CtrReport score_ctr_correlation(const LogSnapshot& log);

}  // namespace raas::analytics
