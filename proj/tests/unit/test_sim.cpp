#include "helpers.hpp"

#include "raas/analytics/reports.hpp"
#include "raas/errors.hpp"
#include "raas/service/service.hpp"
#include "raas/sim/corpus_generator.hpp"
#include "raas/sim/targets.hpp"
#include "raas/sim/traffic.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

using namespace raas;
using namespace raas::sim;

namespace {

struct Env {
    std::shared_ptr<ManualClock> clock;
    std::unique_ptr<Service> service;
    std::unique_ptr<InProcessTarget> target;
    GeneratedCorpus corpus;

    Env(std::size_t size, std::uint64_t seed, const SimConfig& sim)
        : clock(std::make_shared<ManualClock>(sim.start))
    {
        std::stringstream data;
        corpus = generate_corpus({size, seed}, data);
        ServiceOptions opt;
        opt.config.seed = seed;
        opt.clock = clock;
        service = std::make_unique<Service>(std::move(opt));
        service->ingest(data, ExportFormat::Jsonl);
        target = std::make_unique<InProcessTarget>(*service, clock);
    }

    Manifest run(const SimConfig& sim) { return simulate_traffic(sim, *target, corpus.external_ids); }
};

}  // namespace

TEST_CASE("generated corpus is a pure function of its config", "[sim]")
{
    std::ostringstream a, b, c;
    auto ga = generate_corpus({100, 7}, a);
    auto gb = generate_corpus({100, 7}, b);
    (void)generate_corpus({100, 8}, c);
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
    CHECK(ga.external_ids.size() == 100);
    CHECK(ga.external_ids.front() == sim_external_id(0));
    CHECK(sim_external_id(0) == "sim-000001");
    REQUIRE(ga.duplicate_pairs.size() == 1);
    CHECK(ga.noise_author_docs == 2);

    DocumentStore store;
    std::istringstream in(a.str());
    auto report = store.ingest(in, ExportFormat::Jsonl, from_epoch_ms(1'700'000'000'000));
    CHECK(report.records_accepted == 100);
    CHECK(report.records_rejected == 0);
    CHECK(report.duplicate_groups == 1);
    CHECK(report.noise_authors_flagged == 2);
    auto snap = store.snapshot();
    const auto* orig = snap->find_external(ga.duplicate_pairs[0].first);
    const auto* copy = snap->find_external(ga.duplicate_pairs[0].second);
    REQUIRE(orig);
    REQUIRE(copy);
    CHECK(orig->clean_title == copy->clean_title);
    CHECK(orig->year == copy->year);
}

TEST_CASE("planted duplicates are all detected at scale", "[sim]")
{
    std::ostringstream out;
    auto g = generate_corpus({2000, 3}, out);
    CHECK(g.duplicate_pairs.size() == 20);
    DocumentStore store;
    std::istringstream in(out.str());
    auto report = store.ingest(in, ExportFormat::Jsonl, from_epoch_ms(1'700'000'000'000));
    CHECK(report.duplicate_groups == 20);
}

TEST_CASE("generator rejects tiny corpora and supports pathological mode", "[sim]")
{
    std::ostringstream out;
    CHECK_THROWS_AS(generate_corpus({1, 7}, out), ValidationError);
    CorpusGenConfig cfg{50, 2};
    cfg.pathological = true;
    std::ostringstream p;
    (void)generate_corpus(cfg, p);
    DocumentStore store;
    std::istringstream in(p.str());
    store.ingest(in, ExportFormat::Jsonl, from_epoch_ms(1'700'000'000'000));
    for (const auto& d : store.snapshot()->documents()) {
        CHECK_FALSE(d.abstract);
        CHECK(d.clean_title.find(' ') == std::string::npos);
    }
}

TEST_CASE("click model", "[sim]")
{
    ClickModel m;
    m.base_rate = 0.1;
    m.position_decay = 0.5;
    m.latency_decay_per_s = 0.1;
    m.reshow_multiplier = 0.5;
    m.relevance_slope = 1.0;
    m.daily_trend = 0.1;
    CHECK(m.click_probability(1, 0, 0, 0, 0) == Catch::Approx(0.1));
    CHECK(m.click_probability(3, 0, 0, 0, 0) == Catch::Approx(0.025));
    CHECK(m.click_probability(1, 2, 0, 0, 0) == Catch::Approx(0.1 * 0.81));
    CHECK(m.click_probability(1, 0, 2, 0, 0) == Catch::Approx(0.025));
    CHECK(m.click_probability(1, 0, 0, 1.0, 0) == Catch::Approx(0.2));
    CHECK(m.click_probability(1, 0, 0, 0, 5) == Catch::Approx(0.05));
    CHECK(m.click_probability(1, 0, 0, 0, 20) == 0.0);

    auto back = ClickModel::from_json_text(m.to_json_text());
    CHECK(back.to_json_text() == m.to_json_text());

    ClickModel bad;
    bad.delay_mixture = {{0, 10, 0.5}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = ClickModel{};
    bad.base_rate = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("base rate 0 yields no clicks and 1 clicks everything", "[sim]")
{
    SimConfig sim;
    sim.num_requests = 200;
    sim.users = 10;
    sim.model.base_rate = 0.0;
    {
        Env env(200, 5, sim);
        auto m = env.run(sim);
        CHECK(m.requests == 200);
        CHECK(m.failed_requests == 0);
        CHECK(m.impressions > 0);
        CHECK(m.clicks == 0);
        CHECK(env.service->log_snapshot().clicks.empty());
    }
    sim.model.base_rate = 1.0;
    {
        Env env(200, 5, sim);
        auto m = env.run(sim);
        CHECK(m.clicks == m.impressions);
        auto snap = env.service->log_snapshot();
        CHECK(snap.impressions() == m.impressions);
        CHECK(analytics::ctr_report(snap, analytics::Dimension::Algorithm).total_clicks() == m.impressions);
    }
}

TEST_CASE("simulation with a seed is reproducible", "[sim]")
{
    SimConfig sim;
    sim.num_requests = 300;
    sim.count = 0;
    sim.seed = 12;
    sim.model.base_rate = 0.2;
    sim.model.delay_mixture = {{0, 30'000, 0.5}, {86'400'000, 172'800'000, 0.5}};
    sim.model.latency_profile = {{0, 1.0}, {2500, 1.0}};
    std::string first;
    std::size_t clicks = 0;
    std::set<std::int64_t> latencies;
    {
        Env env(300, 1, sim);
        first = env.run(sim).to_json_text();
        auto snap = env.service->log_snapshot();
        clicks = snap.clicks.size();
        for (const auto& s : snap.sets) {
            latencies.insert(s.processing_time_ms);
            CHECK(s.items.size() <= static_cast<std::size_t>(s.requested_count));
        }
        for (const auto& c : snap.clicks) {
            CHECK(((c.delay_ms >= 0 && c.delay_ms < 30'000) || (c.delay_ms >= 86'400'000 && c.delay_ms < 172'800'000)));
        }
    }
    CHECK(latencies == std::set<std::int64_t>{0, 2500});
    Env env(300, 1, sim);
    CHECK(env.run(sim).to_json_text() == first);
    CHECK(env.service->log_snapshot().clicks.size() == clicks);
}

TEST_CASE("unreachable URL target is an error", "[sim]")
{
    UrlTarget target("http://127.0.0.1:1");
    CHECK_THROWS_AS(target.check_reachable(), Error);
}
