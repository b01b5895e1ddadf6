#include "helpers.hpp"

#include "raas/analytics/format.hpp"
#include "raas/analytics/reports.hpp"
#include "raas/analytics/stats.hpp"
#include "raas/errors.hpp"
#include "raas/rng.hpp"
#include "raas/service/ids.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

using namespace raas;
using namespace raas::analytics;

namespace {

constexpr std::int64_t kDay = 86'400'000;
const std::int64_t kT0 = 1'476'748'800'000;

// Random log: users re-requesting a small pool of sources, random delays and clicks.
LogSnapshot random_log(std::uint64_t seed, std::size_t n_sets)
{
    Rng rng(seed);
    LogSnapshot log;
    std::uint64_t id = 0;
    const char* algos[] = {"cbf|terms", "stereotype", "most_popular", "random", "cbf|kp|title|1|3"};
    std::int64_t t = kT0;
    for (std::size_t s = 0; s < n_sets; ++s) {
        t += static_cast<std::int64_t>(rng.below(3'600'000));
        RecommendationSet set;
        set.set_id = hex128(0, ++id);
        set.source = 1 + rng.below(20);
        set.requested_count = static_cast<int>(rng.between(1, 15));
        set.user_token = "u" + std::to_string(rng.below(5));
        set.received_at = from_epoch_ms(t);
        set.processing_time_ms = static_cast<std::int64_t>(rng.below(12'000));
        set.delivered_at = from_epoch_ms(t + set.processing_time_ms);
        set.executed_fingerprint = algos[rng.below(5)];
        set.sampled_fingerprint = set.executed_fingerprint;
        for (int r = 0; r < set.requested_count; ++r) {
            DeliveredItem item{hex128(0, ++id), 100 + rng.below(30), r + 1,
                               static_cast<double>(rng.below(1000)) / 10.0};
            if (rng.bernoulli(0.1)) {
                int n = rng.bernoulli(0.2) ? 2 : 1;
                for (int c = 0; c < n; ++c) {
                    auto delay = static_cast<std::int64_t>(rng.below(7 * kDay));
                    log.clicks.push_back({item.rec_id, set.set_id, from_epoch_ms(t + delay), delay});
                }
            }
            set.items.push_back(item);
        }
        log.sets.push_back(std::move(set));
    }
    return log;
}

std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> to_map(const CtrReport& r)
{
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> out;
    for (const auto& row : r.rows) {
        out[row.bucket] = {row.impressions, row.clicks};
    }
    return out;
}

}  // namespace

TEST_CASE("Wilson interval", "[analytics]")
{
    auto w = wilson_interval(10, 1000);
    CHECK(w.lo >= 0.005);
    CHECK(w.hi <= 0.019);
    CHECK(w.contains(0.01));
    // Closed form.
    const double z = 1.959963984540054, p = 0.01, n = 1000;
    const double c = (p + z * z / (2 * n)) / (1 + z * z / n);
    const double h = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
    CHECK(w.lo == Catch::Approx(c - h).epsilon(1e-12));
    CHECK(w.hi == Catch::Approx(c + h).epsilon(1e-12));
    auto zero = wilson_interval(0, 50);
    CHECK(zero.lo == Catch::Approx(0.0).margin(1e-15));
    CHECK(zero.hi > 0.0);
    auto all = wilson_interval(50, 50);
    CHECK(all.hi == Catch::Approx(1.0));
    CHECK_THROWS(wilson_interval(0, 0));
}

TEST_CASE("Spearman and chi-square against reference values", "[analytics]")
{
    std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> y = {2, 1, 4, 3, 7, 5, 6, 9, 8, 10};
    auto c = spearman(x, y);
    CHECK(c.rho == Catch::Approx(0.9272727272727272).epsilon(1e-12));
    CHECK(c.p_value == Catch::Approx(0.00011203450639397582).epsilon(1e-6));
    CHECK(c.n == 10);

    std::vector<double> a = {1, 2, 3, 4, 5};
    std::vector<double> b = {5, 6, 7, 8, 7};
    auto tie = spearman(a, b);
    CHECK(tie.rho == Catch::Approx(0.8207826816681233).epsilon(1e-12));
    CHECK(tie.p_value == Catch::Approx(0.08858700531354381).epsilon(1e-6));

    std::vector<double> flat = {3, 3, 3, 3, 3};
    CHECK(spearman(a, flat).p_value == 1.0);
    CHECK(average_ranks(std::vector<double>{10, 20, 10, 30}) == std::vector<double>{1.5, 3, 1.5, 4});

    std::vector<double> obs = {48, 52, 55, 45};
    std::vector<double> exp = {50, 50, 50, 50};
    CHECK(chi_square_p(obs, exp) == Catch::Approx(0.7626130659296265).epsilon(1e-9));
    std::vector<double> obs2 = {90, 10};
    std::vector<double> exp2 = {50, 50};
    CHECK(chi_square_p(obs2, exp2) == Catch::Approx(1.2441921148543578e-15).epsilon(1e-6));
}

TEST_CASE("report dimensions conserve impressions and clicks", "[analytics]")
{
    auto log = random_log(1, 800);
    std::set<std::string> clicked;
    for (const auto& c : log.clicks) {
        clicked.insert(c.rec_id);
    }
    for (auto d : {Dimension::Algorithm, Dimension::ProcessingTime, Dimension::SetSize, Dimension::Reshow,
                   Dimension::Day}) {
        INFO(dimension_name(d));
        auto r = ctr_report(log, d);
        CHECK(r.total_impressions() == log.impressions());
        CHECK(r.total_clicks() == clicked.size());
        for (const auto& row : r.rows) {
            if (row.impressions > 0) {
                REQUIRE(row.ctr);
                CHECK(row.wilson->contains(*row.ctr));
            } else {
                CHECK_FALSE(row.ctr);
            }
        }
    }
}

TEST_CASE("algorithm and latency reports match a naive tally", "[analytics]")
{
    auto log = random_log(2, 600);
    std::set<std::string> clicked;
    for (const auto& c : log.clicks) {
        clicked.insert(c.rec_id);
    }
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> algo, lat;
    for (const auto& s : log.sets) {
        for (const auto& i : s.items) {
            auto& a = algo[s.executed_fingerprint];
            auto sec = std::min<std::int64_t>(s.processing_time_ms / 1000, 10);
            auto& l = lat[sec == 10 ? ">10s" : std::to_string(sec) + "-" + std::to_string(sec + 1) + "s"];
            ++a.first;
            ++l.first;
            if (clicked.contains(i.rec_id)) {
                ++a.second;
                ++l.second;
            }
        }
    }
    CHECK(to_map(ctr_report(log, Dimension::Algorithm)) == algo);
    CHECK(to_map(ctr_report(log, Dimension::ProcessingTime)) == lat);
    CHECK(parse_dimension("latency") == Dimension::ProcessingTime);
    CHECK_FALSE(parse_dimension("bogus"));
}

TEST_CASE("reshow report and delay filter match a naive reference", "[analytics]")
{
    auto log = random_log(3, 1500);
    std::set<std::string> clicked;
    for (const auto& c : log.clicks) {
        clicked.insert(c.rec_id);
    }
    for (std::optional<std::int64_t> filter : {std::optional<std::int64_t>{}, std::optional<std::int64_t>{kDay},
                                               std::optional<std::int64_t>{3'600'000}}) {
        // Naive: for every delivery scan all earlier deliveries of the same pair.
        std::vector<const RecommendationSet*> order;
        for (const auto& s : log.sets) {
            order.push_back(&s);
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const auto* a, const auto* b) { return a->delivered_at < b->delivered_at; });
        std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> expected;
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (const auto& item : order[i]->items) {
                std::uint64_t prior = 0;
                std::optional<UtcMillis> last;
                for (std::size_t j = 0; j < i; ++j) {
                    for (const auto& other : order[j]->items) {
                        if (order[j]->user_token == order[i]->user_token && other.doc_id == item.doc_id) {
                            ++prior;
                            last = order[j]->delivered_at;
                        }
                    }
                }
                // Repeats within one set count as earlier deliveries too.
                for (const auto& other : order[i]->items) {
                    if (&other == &item) {
                        break;
                    }
                    if (other.doc_id == item.doc_id) {
                        ++prior;
                        last = order[i]->delivered_at;
                    }
                }
                if (filter && last && (order[i]->delivered_at - *last).count() < *filter) {
                    continue;
                }
                auto& e = expected[std::to_string(prior)];
                ++e.first;
                e.second += clicked.contains(item.rec_id) ? 1 : 0;
            }
        }
        ReportOptions opt;
        if (filter) {
            opt.reshow_delay_filter = std::chrono::milliseconds(*filter);
        }
        auto got = to_map(ctr_report(log, Dimension::Reshow, opt));
        for (auto it = got.begin(); it != got.end();) {
            it = it->second.first == 0 ? got.erase(it) : std::next(it);
        }
        CHECK(got == expected);
    }
}

TEST_CASE("reports are deterministic", "[analytics]")
{
    auto a = random_log(9, 300);
    auto b = random_log(9, 300);
    for (auto f : {OutputFormat::Json, OutputFormat::Csv, OutputFormat::Table}) {
        CHECK(format_report(ctr_report(a, Dimension::Algorithm), f)
              == format_report(ctr_report(b, Dimension::Algorithm), f));
    }
}

TEST_CASE("CSV and table output", "[analytics]")
{
    LogSnapshot log;
    RecommendationSet s;
    s.set_id = hex128(0, 1);
    s.executed_fingerprint = "cbf|terms";
    s.delivered_at = from_epoch_ms(kT0);
    s.items = {{hex128(0, 2), 1, 1, 1.0}, {hex128(0, 3), 2, 2, 0.5}};
    log.sets.push_back(s);
    log.clicks.push_back({hex128(0, 2), s.set_id, from_epoch_ms(kT0), 5});
    auto csv = format_report(ctr_report(log, Dimension::Algorithm), OutputFormat::Csv);
    CHECK(csv.starts_with("bucket,impressions,clicks,ctr,wilson_lo,wilson_hi\n"));
    CHECK(csv.find("cbf|terms,2,1,0.50000000,") != std::string::npos);
    auto sizes = format_report(ctr_report(log, Dimension::SetSize), OutputFormat::Csv);
    CHECK(sizes.find("\n1,0,0,,,\n") != std::string::npos);
    auto table = format_report(ctr_report(log, Dimension::Algorithm), OutputFormat::Table);
    CHECK(table.find("cbf|terms") != std::string::npos);
    CHECK(parse_output_format("csv") == OutputFormat::Csv);
}

TEST_CASE("click delay histogram buckets", "[analytics]")
{
    LogSnapshot log;
    for (std::int64_t d : {std::int64_t{0}, std::int64_t{29'999}, std::int64_t{30'000}, std::int64_t{90'000},
                           std::int64_t{600'000}, std::int64_t{7'200'000}, 2 * kDay, 5 * kDay, 6 * kDay}) {
        log.clicks.push_back({"r", "s", from_epoch_ms(kT0 + d), d});
    }
    auto h = click_delay_histogram(log);
    REQUIRE(h.buckets.size() == 6);
    CHECK(h.total == 9);
    std::vector<std::uint64_t> counts;
    for (const auto& b : h.buckets) {
        counts.push_back(b.count);
    }
    CHECK(counts == std::vector<std::uint64_t>{2, 2, 1, 1, 1, 2});
    CHECK(h.buckets[0].label == "<30s");
    CHECK(h.buckets[5].label == ">5d");
    CHECK(h.buckets[0].fraction == Catch::Approx(2.0 / 9.0));
    CHECK(format_histogram(h, OutputFormat::Csv).starts_with("bucket,count,fraction\n"));
}

TEST_CASE("time series trend", "[analytics]")
{
    LogSnapshot log;
    std::uint64_t id = 0;
    for (int day = 0; day < 20; ++day) {
        RecommendationSet s;
        s.set_id = hex128(1, ++id);
        s.executed_fingerprint = "cbf|terms";
        s.delivered_at = from_epoch_ms(kT0 + day * kDay + 1000);
        for (int i = 0; i < 100; ++i) {
            s.items.push_back({hex128(2, ++id), 1, i + 1, 1.0});
            if (i < 40 - 2 * day) {
                log.clicks.push_back({s.items.back().rec_id, s.set_id, s.delivered_at, 0});
            }
        }
        log.sets.push_back(s);
    }
    auto ts = ctr_time_series(log);
    REQUIRE(ts.points.size() == 20);
    CHECK(ts.points[0].day == "2016-10-18");
    CHECK(ts.points[0].ctr == Catch::Approx(0.40));
    CHECK(ts.trend.rho == Catch::Approx(-1.0));
    CHECK(ts.trend.p_value < 0.01);
    auto day = ctr_report(log, Dimension::Day);
    CHECK(day.rows.size() == 20);
    CHECK(day.rows.front().bucket == "2016-10-18");
}

TEST_CASE("relevance deciles", "[analytics]")
{
    LogSnapshot log;
    RecommendationSet s;
    s.set_id = hex128(5, 0);
    s.executed_fingerprint = "cbf|terms";
    for (int i = 0; i < 100; ++i) {
        s.items.push_back({hex128(5, static_cast<std::uint64_t>(i + 1)), 1, i + 1, static_cast<double>(i)});
        if (i % 10 < i / 10) {
            log.clicks.push_back({s.items.back().rec_id, s.set_id, {}, 0});
        }
    }
    log.sets.push_back(s);
    auto r = score_ctr_correlation(log);
    REQUIRE(r.rows.size() == 10);
    for (std::size_t d = 0; d < 10; ++d) {
        CHECK(r.rows[d].bucket == "d" + std::to_string(d + 1));
        CHECK(r.rows[d].impressions == 10);
        CHECK(r.rows[d].clicks == d);
    }
    REQUIRE(r.spearman);
    CHECK(r.spearman->rho == Catch::Approx(1.0));

    LogSnapshot few;
    RecommendationSet f;
    f.executed_fingerprint = "cbf|terms";
    for (int i = 0; i < 50; ++i) {
        f.items.push_back({hex128(6, static_cast<std::uint64_t>(i)), 1, 1, static_cast<double>(i % 9)});
    }
    few.sets.push_back(f);
    CHECK_THROWS_AS(score_ctr_correlation(few), InsufficientData);
    CHECK_THROWS_WITH(score_ctr_correlation(few), "insufficient score diversity");

    // Non-CBF sets do not count toward diversity.
    f.executed_fingerprint = "random";
    for (auto& item : f.items) {
        item.relevance = static_cast<double>(&item - f.items.data());
    }
    few.sets.push_back(f);
    CHECK_THROWS_AS(score_ctr_correlation(few), InsufficientData);
}
