#include "raas/sim/targets.hpp"

#include "raas/errors.hpp"

#include <httplib.h>
#include <json.hpp>

namespace raas::sim {

using json = nlohmann::json;

InProcessTarget::InProcessTarget(Service& service, std::shared_ptr<ManualClock> clock)
    : m_service(service), m_clock(std::move(clock))
{
    m_service.set_before_delivery([this](const RecommendationSet&) {
        m_clock->advance(m_pending_latency);
        m_pending_latency = std::chrono::milliseconds{0};
    });
}

InProcessTarget::~InProcessTarget() { m_service.set_before_delivery({}); }

void InProcessTarget::set_time(UtcMillis t)
{
    if (t > m_clock->now()) {
        m_clock->set(t);
    }
}

ObservedSet InProcessTarget::request(const std::string& external_id, int count,
                                     const std::optional<std::string>& user)
{
    const auto set = m_service.request_related(external_id, count, user);
    const auto engine = m_service.engine();
    ObservedSet out;
    out.set_id = set.set_id;
    out.processing_time_ms = set.processing_time_ms;
    out.sampled = set.sampled_fingerprint;
    out.executed = set.executed_fingerprint;
    out.fallback_used = set.fallback_used;
    out.delivered_at = set.delivered_at;
    for (const auto& item : set.items) {
        const auto* doc = engine->corpus->find(item.doc_id);
        out.items.push_back({item.rec_id, doc != nullptr ? doc->external_id : std::string{}, item.rank,
                             item.relevance});
    }
    return out;
}

bool InProcessTarget::click(const std::string& rec_id)
{
    try {
        m_service.record_click(rec_id);
        return true;
    } catch (const NotFoundError&) {
        return false;
    }
}

namespace {

httplib::Client& thread_client(const std::string& base)
{
    thread_local std::string bound;
    thread_local std::unique_ptr<httplib::Client> client;
    if (!client || bound != base) {
        client = std::make_unique<httplib::Client>(base);
        client->set_keep_alive(true);
        client->set_connection_timeout(5, 0);
        client->set_read_timeout(60, 0);
        bound = base;
    }
    return *client;
}

}  // namespace

UrlTarget::UrlTarget(std::string base_url) : m_base(std::move(base_url))
{
    while (!m_base.empty() && m_base.back() == '/') {
        m_base.pop_back();
    }
}

UrlTarget::~UrlTarget() = default;

UtcMillis UrlTarget::time() const { return m_clock.now(); }

void UrlTarget::check_reachable()
{
    auto res = thread_client(m_base).Get("/v1/health");
    if (!res || res->status != 200) {
        throw Error("target unreachable: " + m_base);
    }
}

ObservedSet UrlTarget::request(const std::string& external_id, int count, const std::optional<std::string>& user)
{
    httplib::Params params{{"count", std::to_string(count)}};
    if (user) {
        params.emplace("user", *user);
    }
    const auto path = "/v1/documents/" + httplib::detail::encode_url(external_id) + "/related";
    auto res = thread_client(m_base).Get(path, params, httplib::Headers{});
    if (!res) {
        throw Error("target unreachable: " + m_base + " (" + httplib::to_string(res.error()) + ")");
    }
    ObservedSet out;
    out.http_status = res->status;
    out.delivered_at = m_clock.now();
    if (res->status != 200) {
        return out;
    }
    auto j = json::parse(res->body);
    out.set_id = j.at("set_id").get<std::string>();
    out.processing_time_ms = j.at("processing_time_ms").get<std::int64_t>();
    out.fallback_used = j.at("fallback_used").get<bool>();
    out.sampled = j.at("algorithm").at("sampled").get<std::string>();
    out.executed = j.at("algorithm").at("executed").get<std::string>();
    for (const auto& r : j.at("recommendations")) {
        out.items.push_back({r.at("rec_id").get<std::string>(), r.at("external_id").get<std::string>(),
                             r.at("rank").get<int>(), r.at("relevance").get<double>()});
    }
    return out;
}

bool UrlTarget::click(const std::string& rec_id)
{
    auto res = thread_client(m_base).Post("/v1/clicks/" + rec_id);
    if (!res) {
        throw Error("target unreachable: " + m_base);
    }
    return res->status == 204;
}

std::unique_ptr<Target> make_url_target(const std::string& base_url)
{
    auto t = std::make_unique<UrlTarget>(base_url);
    t->check_reachable();
    return t;
}

}  // namespace raas::sim
