#include "raas/analytics/reports.hpp"

#include "raas/errors.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace raas::analytics {

std::optional<Dimension> parse_dimension(std::string_view name)
{
    if (name == "algorithm") {
        return Dimension::Algorithm;
    }
    if (name == "latency") {
        return Dimension::ProcessingTime;
    }
    if (name == "setsize") {
        return Dimension::SetSize;
    }
    if (name == "reshow") {
        return Dimension::Reshow;
    }
    if (name == "day") {
        return Dimension::Day;
    }
    if (name == "scorectr") {
        return Dimension::RelevanceDecile;
    }
    return std::nullopt;
}

const char* dimension_name(Dimension d)
{
    switch (d) {
    case Dimension::Algorithm:
        return "algorithm";
    case Dimension::ProcessingTime:
        return "latency";
    case Dimension::SetSize:
        return "setsize";
    case Dimension::Reshow:
        return "reshow";
    case Dimension::Day:
        return "day";
    case Dimension::RelevanceDecile:
        return "scorectr";
    }
    return "?";
}

std::uint64_t CtrReport::total_impressions() const
{
    std::uint64_t n = 0;
    for (const auto& r : rows) {
        n += r.impressions;
    }
    return n;
}

std::uint64_t CtrReport::total_clicks() const
{
    std::uint64_t n = 0;
    for (const auto& r : rows) {
        n += r.clicks;
    }
    return n;
}

namespace {

constexpr std::int64_t kSecond = 1000;
constexpr std::int64_t kMinute = 60 * kSecond;
constexpr std::int64_t kHour = 60 * kMinute;
constexpr std::int64_t kDay = 24 * kHour;
constexpr int kLatencyBuckets = 10;
constexpr int kMaxSetSize = 15;

std::unordered_set<std::string_view> clicked_items(const LogSnapshot& log)
{
    std::unordered_set<std::string_view> out;
    out.reserve(log.clicks.size());
    for (const auto& c : log.clicks) {
        out.insert(c.rec_id);
    }
    return out;
}

struct Tally {
    std::uint64_t impressions = 0;
    std::uint64_t clicks = 0;
};

CtrRow make_row(std::string bucket, const Tally& t)
{
    CtrRow row{std::move(bucket), t.impressions, t.clicks, std::nullopt, std::nullopt};
    if (t.impressions > 0) {
        row.ctr = static_cast<double>(t.clicks) / static_cast<double>(t.impressions);
        row.wilson = wilson_interval(t.clicks, t.impressions);
    }
    return row;
}

std::string latency_label(int bucket)
{
    if (bucket >= kLatencyBuckets) {
        return ">10s";
    }
    return std::to_string(bucket) + "-" + std::to_string(bucket + 1) + "s";
}

/// Delivery order: by delivery time, then append order.
std::vector<std::size_t> delivery_order(const LogSnapshot& log)
{
    std::vector<std::size_t> order(log.sets.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return log.sets[a].delivered_at < log.sets[b].delivered_at; });
    return order;
}

CtrReport reshow_report(const LogSnapshot& log, const ReportOptions& options,
                        const std::unordered_set<std::string_view>& clicked)
{
    struct PairState {
        std::uint64_t deliveries = 0;
        std::int64_t last_ms = 0;
    };
    struct PairHash {
        std::size_t operator()(const std::pair<std::string_view, DocId>& p) const noexcept
        {
            return std::hash<std::string_view>{}(p.first) ^ (p.second * 0x9E3779B97F4A7C15ULL);
        }
    };
    std::unordered_map<std::pair<std::string_view, DocId>, PairState, PairHash> pairs;
    std::vector<Tally> tallies;

    for (auto idx : delivery_order(log)) {
        const auto& set = log.sets[idx];
        if (!set.user_token) {
            continue;
        }
        const auto at = to_epoch_ms(set.delivered_at);
        for (const auto& item : set.items) {
            auto& st = pairs[{*set.user_token, item.doc_id}];
            const auto reshow = st.deliveries;
            const bool excluded = options.reshow_delay_filter && st.deliveries > 0
                                  && at - st.last_ms < options.reshow_delay_filter->count();
            ++st.deliveries;
            st.last_ms = at;
            if (excluded) {
                continue;
            }
            if (tallies.size() <= reshow) {
                tallies.resize(reshow + 1);
            }
            ++tallies[reshow].impressions;
            if (clicked.contains(item.rec_id)) {
                ++tallies[reshow].clicks;
            }
        }
    }

    CtrReport report{Dimension::Reshow, {}, std::nullopt};
    for (std::size_t i = 0; i < tallies.size(); ++i) {
        report.rows.push_back(make_row(std::to_string(i), tallies[i]));
    }
    return report;
}

}  // namespace

CtrReport ctr_report(const LogSnapshot& log, Dimension dimension, const ReportOptions& options)
{
    if (dimension == Dimension::RelevanceDecile) {
        return score_ctr_correlation(log);
    }
    CtrReport report{dimension, {}, std::nullopt};
    if (log.sets.empty()) {
        return report;
    }
    const auto clicked = clicked_items(log);
    if (dimension == Dimension::Reshow) {
        return reshow_report(log, options, clicked);
    }

    auto count_set = [&](const RecommendationSet& set, Tally& t) {
        for (const auto& item : set.items) {
            ++t.impressions;
            if (clicked.contains(item.rec_id)) {
                ++t.clicks;
            }
        }
    };

    switch (dimension) {
    case Dimension::Algorithm:
    case Dimension::Day: {
        std::map<std::string, Tally> buckets;
        for (const auto& set : log.sets) {
            auto key = dimension == Dimension::Algorithm ? set.executed_fingerprint : utc_date(set.delivered_at);
            count_set(set, buckets[key]);
        }
        for (const auto& [key, tally] : buckets) {
            report.rows.push_back(make_row(key, tally));
        }
        break;
    }
    case Dimension::ProcessingTime: {
        std::vector<Tally> buckets(kLatencyBuckets + 1);
        for (const auto& set : log.sets) {
            auto b = std::clamp<std::int64_t>(set.processing_time_ms / kSecond, 0, kLatencyBuckets);
            count_set(set, buckets[static_cast<std::size_t>(b)]);
        }
        for (int i = 0; i <= kLatencyBuckets; ++i) {
            report.rows.push_back(make_row(latency_label(i), buckets[static_cast<std::size_t>(i)]));
        }
        break;
    }
    case Dimension::SetSize: {
        std::vector<Tally> buckets(kMaxSetSize + 1);
        for (const auto& set : log.sets) {
            auto size = std::min<std::size_t>(set.items.size(), kMaxSetSize);
            count_set(set, buckets[size]);
        }
        for (int i = 1; i <= kMaxSetSize; ++i) {
            report.rows.push_back(make_row(std::to_string(i), buckets[static_cast<std::size_t>(i)]));
        }
        break;
    }
    default:
        break;
    }
    return report;
}

DelayHistogram click_delay_histogram(const LogSnapshot& log)
{
    static const std::int64_t edges[] = {30 * kSecond, 5 * kMinute, kHour, kDay, 5 * kDay};
    static const char* labels[] = {"<30s", "30s-5min", "5min-1h", "1h-1d", "1d-5d", ">5d"};
    DelayHistogram h;
    for (const auto* label : labels) {
        h.buckets.push_back({label, 0, 0.0});
    }
    for (const auto& c : log.clicks) {
        auto it = std::upper_bound(std::begin(edges), std::end(edges), c.delay_ms);
        ++h.buckets[static_cast<std::size_t>(it - std::begin(edges))].count;
        ++h.total;
    }
    if (h.total > 0) {
        for (auto& b : h.buckets) {
            b.fraction = static_cast<double>(b.count) / static_cast<double>(h.total);
        }
    }
    return h;
}

TimeSeries ctr_time_series(const LogSnapshot& log)
{
    const auto clicked = clicked_items(log);
    std::map<std::int64_t, Tally> days;
    for (const auto& set : log.sets) {
        if (set.items.empty()) {
            continue;
        }
        auto ms = to_epoch_ms(set.delivered_at);
        auto day = ms >= 0 ? ms / kDay : (ms - kDay + 1) / kDay;
        auto& t = days[day];
        for (const auto& item : set.items) {
            ++t.impressions;
            if (clicked.contains(item.rec_id)) {
                ++t.clicks;
            }
        }
    }
    TimeSeries ts;
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [day, t] : days) {
        TimeSeriesPoint p;
        p.day = utc_date(from_epoch_ms(day * kDay));
        p.impressions = t.impressions;
        p.clicks = t.clicks;
        p.ctr = static_cast<double>(t.clicks) / static_cast<double>(t.impressions);
        x.push_back(static_cast<double>(day));
        y.push_back(p.ctr);
        ts.points.push_back(std::move(p));
    }
    ts.trend = spearman(x, y);
    return ts;
}

CtrReport score_ctr_correlation(const LogSnapshot& log)
{
    const auto clicked = clicked_items(log);
    struct Item {
        double relevance;
        bool clicked;
    };
    std::vector<Item> items;
    for (const auto& set : log.sets) {
        if (!set.executed_fingerprint.starts_with("cbf")) {
            continue;
        }
        for (const auto& it : set.items) {
            items.push_back({it.relevance, clicked.contains(it.rec_id)});
        }
    }
    std::vector<double> sorted;
    sorted.reserve(items.size());
    for (const auto& it : items) {
        sorted.push_back(it.relevance);
    }
    std::sort(sorted.begin(), sorted.end());
    std::size_t distinct = sorted.empty() ? 0 : 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        distinct += sorted[i] != sorted[i - 1] ? 1 : 0;
    }
    if (distinct < 10) {
        throw InsufficientData("insufficient score diversity");
    }

    // Cut points at the 10%, 20%, .. 90% order statistics; equal scores share a decile.
    std::vector<double> cuts;
    for (std::size_t k = 1; k < 10; ++k) {
        cuts.push_back(sorted[k * sorted.size() / 10]);
    }
    std::vector<Tally> deciles(10);
    for (const auto& it : items) {
        auto d = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), it.relevance) - cuts.begin());
        ++deciles[d].impressions;
        if (it.clicked) {
            ++deciles[d].clicks;
        }
    }

    CtrReport report{Dimension::RelevanceDecile, {}, std::nullopt};
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t d = 0; d < 10; ++d) {
        report.rows.push_back(make_row("d" + std::to_string(d + 1), deciles[d]));
        if (deciles[d].impressions > 0) {
            x.push_back(static_cast<double>(d + 1));
            y.push_back(*report.rows.back().ctr);
        }
    }
    report.spearman = spearman(x, y);
    return report;
}

}  // namespace raas::analytics
