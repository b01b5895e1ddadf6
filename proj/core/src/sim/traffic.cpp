#include "raas/sim/traffic.hpp"

#include "raas/errors.hpp"
#include "raas/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <queue>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace raas::sim {

using json = nlohmann::json;

namespace {

constexpr std::int64_t kDayMs = 86'400'000;

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string latency_bucket(std::int64_t ms)
{
    auto b = std::clamp<std::int64_t>(ms / 1000, 0, 10);
    return b >= 10 ? ">10s" : std::to_string(b) + "-" + std::to_string(b + 1) + "s";
}

}  // namespace

void ClickModel::validate() const
{
    auto unit = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError(std::string(name) + " must lie in [0, 1]");
        }
    };
    unit(base_rate, "base_rate");
    unit(latency_decay_per_s, "latency_decay_per_s");
    if (!(position_decay > 0.0 && position_decay <= 1.0)) {
        throw ValidationError("position_decay must lie in (0, 1]");
    }
    if (!(reshow_multiplier > 0.0 && reshow_multiplier <= 1.0)) {
        throw ValidationError("reshow_multiplier must lie in (0, 1]");
    }
    if (!(relevance_slope >= 0.0)) {
        throw ValidationError("relevance_slope must be non-negative");
    }
    if (!(daily_trend >= 0.0)) {
        throw ValidationError("daily_trend must be non-negative");
    }
    double sum = 0.0;
    for (const auto& c : delay_mixture) {
        if (c.lo_ms < 0 || c.hi_ms <= c.lo_ms || c.probability < 0.0) {
            throw ValidationError("delay_mixture components need 0 <= lo < hi and probability >= 0");
        }
        sum += c.probability;
    }
    if (delay_mixture.empty() || std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("delay_mixture probabilities must sum to 1");
    }
    for (const auto& s : latency_profile) {
        if (s.processing_ms < 0 || s.weight < 0.0) {
            throw ValidationError("latency_profile steps need non-negative time and weight");
        }
    }
}

double ClickModel::click_probability(int rank, double processing_seconds, std::uint64_t reshow_count,
                                     double normalized_relevance, std::int64_t day_index) const
{
    double p = base_rate;
    p *= std::pow(position_decay, static_cast<double>(std::max(rank, 1) - 1));
    p *= std::pow(1.0 - latency_decay_per_s, std::max(processing_seconds, 0.0));
    p *= std::pow(reshow_multiplier, static_cast<double>(reshow_count));
    p *= 1.0 + relevance_slope * normalized_relevance;
    p *= std::max(0.0, 1.0 - daily_trend * static_cast<double>(day_index));
    return std::clamp(p, 0.0, 1.0);
}

ClickModel ClickModel::from_json_text(const std::string& text)
{
    ClickModel m;
    try {
        auto j = json::parse(text);
        m.base_rate = j.value("base_rate", m.base_rate);
        m.position_decay = j.value("position_decay", m.position_decay);
        m.latency_decay_per_s = j.value("latency_decay_per_s", m.latency_decay_per_s);
        m.reshow_multiplier = j.value("reshow_multiplier", m.reshow_multiplier);
        m.relevance_slope = j.value("relevance_slope", m.relevance_slope);
        m.daily_trend = j.value("daily_trend", m.daily_trend);
        if (j.contains("delay_mixture")) {
            m.delay_mixture.clear();
            for (const auto& c : j.at("delay_mixture")) {
                m.delay_mixture.push_back({c.at("lo_ms").get<std::int64_t>(), c.at("hi_ms").get<std::int64_t>(),
                                           c.at("probability").get<double>()});
            }
        }
        if (j.contains("latency_profile")) {
            for (const auto& s : j.at("latency_profile")) {
                m.latency_profile.push_back({s.at("processing_ms").get<std::int64_t>(), s.value("weight", 1.0)});
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad click model: ") + e.what());
    }
    m.validate();
    return m;
}

ClickModel ClickModel::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open click model: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

namespace {

json model_json(const ClickModel& m)
{
    json mixture = json::array();
    for (const auto& c : m.delay_mixture) {
        mixture.push_back({{"lo_ms", c.lo_ms}, {"hi_ms", c.hi_ms}, {"probability", c.probability}});
    }
    json profile = json::array();
    for (const auto& s : m.latency_profile) {
        profile.push_back({{"processing_ms", s.processing_ms}, {"weight", s.weight}});
    }
    return {{"base_rate", m.base_rate},
            {"position_decay", m.position_decay},
            {"latency_decay_per_s", m.latency_decay_per_s},
            {"reshow_multiplier", m.reshow_multiplier},
            {"relevance_slope", m.relevance_slope},
            {"daily_trend", m.daily_trend},
            {"delay_mixture", std::move(mixture)},
            {"latency_profile", std::move(profile)}};
}

}  // namespace

std::string ClickModel::to_json_text() const { return model_json(*this).dump(2); }

std::string Manifest::to_json_text() const
{
    json expected_json = json::object();
    for (const auto& [dim, buckets] : expected) {
        json b = json::object();
        for (const auto& [label, e] : buckets) {
            b[label] = {{"impressions", e.impressions},
                        {"expected_clicks", e.expected_clicks},
                        {"expected_ctr", e.expected_ctr()}};
        }
        expected_json[dim] = std::move(b);
    }
    json delay = json::array();
    for (const auto& c : config.model.delay_mixture) {
        delay.push_back({{"lo_ms", c.lo_ms}, {"hi_ms", c.hi_ms}, {"probability", c.probability}});
    }
    json j = {{"planted",
               {{"corpus_size", config.corpus_size},
                {"num_requests", config.num_requests},
                {"seed", config.seed},
                {"users", config.users},
                {"count", config.count},
                {"requests_per_day", config.requests_per_day},
                {"workers", config.workers},
                {"start", to_epoch_ms(config.start)},
                {"model", model_json(config.model)}}},
              {"requests", requests},
              {"failed_requests", failed_requests},
              {"impressions", impressions},
              {"clicks", clicks},
              {"fallback_sets", fallback_sets},
              {"expected", std::move(expected_json)}};
    return j.dump(2);
}

namespace {

struct PendingClick {
    std::int64_t at_ms;
    std::string rec_id;

    bool operator>(const PendingClick& o) const { return at_ms != o.at_ms ? at_ms > o.at_ms : rec_id > o.rec_id; }
};

class Simulation {
  public:
    Simulation(const SimConfig& config, Target& target, std::span<const std::string> sources)
        : m_config(config), m_target(target), m_sources(sources)
    {
        m_manifest.config = config;
        for (const auto& s : config.model.latency_profile) {
            m_latency_total += s.weight;
        }
    }

    Manifest run()
    {
        if (m_sources.empty()) {
            throw ValidationError("simulation needs at least one source document");
        }
        if (m_target.has_virtual_time()) {
            run_virtual();
        } else {
            run_parallel();
        }
        return std::move(m_manifest);
    }

  private:
    struct Request {
        std::string source;
        int count;
        std::string user;
        std::int64_t latency_ms;
    };

    Request plan(std::size_t i) const
    {
        Rng rng(derive_seed(derive_seed(m_config.seed, 0x7EA), i));
        const std::size_t pool = m_config.source_pool == 0 ? m_sources.size()
                                                           : std::min(m_config.source_pool, m_sources.size());
        Request r;
        r.source = m_sources[rng.below(pool)];
        r.count = m_config.count == 0 ? static_cast<int>(rng.between(1, 15)) : m_config.count;
        r.user = "user-" + std::to_string(rng.below(std::max<std::size_t>(m_config.users, 1)));
        r.latency_ms = 0;
        if (m_latency_total > 0.0) {
            double u = rng.uniform01() * m_latency_total;
            for (const auto& s : m_config.model.latency_profile) {
                r.latency_ms = s.processing_ms;
                if (u < s.weight) {
                    break;
                }
                u -= s.weight;
            }
        }
        return r;
    }

    std::int64_t sample_delay(Rng& rng) const
    {
        double u = rng.uniform01();
        const auto& mix = m_config.model.delay_mixture;
        const DelayComponent* pick = &mix.back();
        for (const auto& c : mix) {
            if (u < c.probability) {
                pick = &c;
                break;
            }
            u -= c.probability;
        }
        return pick->lo_ms + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(pick->hi_ms - pick->lo_ms)));
    }

    /// Applies the model to one delivered set; returns the clicks to record.
    std::vector<PendingClick> observe(const Request& req, const ObservedSet& set)
    {
        std::vector<PendingClick> clicks;
        std::lock_guard lock(m_mutex);
        ++m_manifest.requests;
        if (set.http_status != 200) {
            ++m_manifest.failed_requests;
            return clicks;
        }
        m_manifest.processing_times_ms.push_back(set.processing_time_ms);
        m_manifest.fallback_sets += set.fallback_used ? 1 : 0;

        double max_rel = 0.0;
        for (const auto& item : set.items) {
            max_rel = std::max(max_rel, item.relevance);
        }
        const auto delivered = to_epoch_ms(set.delivered_at);
        const auto day_index = (delivered - to_epoch_ms(m_config.start)) / kDayMs;
        const auto day_label = utc_date(set.delivered_at);
        const auto lat_label = latency_bucket(set.processing_time_ms);
        const auto size_label = std::to_string(set.items.size());
        const double seconds = static_cast<double>(set.processing_time_ms) / 1000.0;

        for (const auto& item : set.items) {
            auto& reshow = m_reshows[req.user + '\x1f' + item.external_id];
            const double norm = max_rel > 0.0 ? item.relevance / max_rel : 0.0;
            const double p = m_config.model.click_probability(item.rank, seconds, reshow, norm, day_index);

            auto add = [&](const char* dim, const std::string& label) {
                auto& e = m_manifest.expected[dim][label];
                ++e.impressions;
                e.expected_clicks += p;
            };
            add("latency", lat_label);
            add("setsize", size_label);
            add("reshow", std::to_string(reshow));
            add("day", day_label);
            add("algorithm", set.executed);
            ++reshow;
            ++m_manifest.impressions;

            Rng rng(derive_seed(m_config.seed, fnv1a(item.rec_id)));
            if (rng.uniform01() < p) {
                ++m_manifest.clicks;
                clicks.push_back({delivered + sample_delay(rng), item.rec_id});
            }
        }
        return clicks;
    }

    void fire_until(std::int64_t until_ms)
    {
        while (!m_pending.empty() && m_pending.top().at_ms <= until_ms) {
            auto c = m_pending.top();
            m_pending.pop();
            m_target.set_time(from_epoch_ms(c.at_ms));
            m_target.click(c.rec_id);
        }
    }

    void run_virtual()
    {
        const auto start = to_epoch_ms(m_config.start);
        const double spacing = static_cast<double>(kDayMs) / static_cast<double>(std::max<std::size_t>(m_config.requests_per_day, 1));
        for (std::size_t i = 0; i < m_config.num_requests; ++i) {
            const auto req = plan(i);
            const auto at = start + static_cast<std::int64_t>(std::floor(spacing * static_cast<double>(i)));
            // Clicks due before this request completes fire first, at their own times.
            fire_until(at + req.latency_ms);
            m_target.set_time(from_epoch_ms(at));
            m_target.inject_latency(std::chrono::milliseconds(req.latency_ms));
            const auto set = m_target.request(req.source, req.count, req.user);
            for (auto& c : observe(req, set)) {
                m_pending.push(std::move(c));
            }
        }
        fire_until(std::numeric_limits<std::int64_t>::max());
    }

    void run_parallel()
    {
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::string error;
        auto worker = [&] {
            try {
                for (auto i = next.fetch_add(1); i < m_config.num_requests; i = next.fetch_add(1)) {
                    const auto req = plan(i);
                    const auto set = m_target.request(req.source, req.count, req.user);
                    for (const auto& c : observe(req, set)) {
                        m_target.click(c.rec_id);
                    }
                }
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                error = e.what();
                next.store(m_config.num_requests);
            }
        };
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < std::max<std::size_t>(m_config.workers, 1); ++w) {
            threads.emplace_back(worker);
        }
        for (auto& t : threads) {
            t.join();
        }
        if (!error.empty()) {
            throw Error(error);
        }
    }

    const SimConfig& m_config;
    Target& m_target;
    std::span<const std::string> m_sources;
    double m_latency_total = 0.0;
    Manifest m_manifest;
    std::mutex m_mutex;
    std::unordered_map<std::string, std::uint64_t> m_reshows;
    std::priority_queue<PendingClick, std::vector<PendingClick>, std::greater<>> m_pending;
};

}  // namespace

Manifest simulate_traffic(const SimConfig& config, Target& target, std::span<const std::string> source_ids)
{
    config.model.validate();
    Simulation sim(config, target, source_ids);
    return sim.run();
}

}  // namespace raas::sim
