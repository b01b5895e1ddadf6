#pragma once

#include "raas/service/clock.hpp"
#include "raas/service/service.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace raas::sim {

struct ObservedItem {
    std::string rec_id;
    std::string external_id;
    int rank = 0;
    double relevance = 0.0;
};

struct ObservedSet {
    std::string set_id;
    std::int64_t processing_time_ms = 0;
    std::string sampled;
    std::string executed;
    bool fallback_used = false;
    std::vector<ObservedItem> items;
    UtcMillis delivered_at{};
    int http_status = 200;
};

/// Where simulated traffic goes.
class Target {
  public:
    virtual ~Target() = default;

    virtual ObservedSet request(const std::string& external_id, int count, const std::optional<std::string>& user) = 0;
    /// Records a click. Returns false when the service rejected it.
    virtual bool click(const std::string& rec_id) = 0;

    /// Virtual-time targets let the simulator place requests and clicks on
    /// a timeline and inject processing time.
    virtual bool has_virtual_time() const { return false; }
    virtual void set_time(UtcMillis) {}
    virtual UtcMillis time() const = 0;
    /// Extra processing time for the next request (virtual-time targets only).
    virtual void inject_latency(std::chrono::milliseconds) {}
};

/// Calls a Service directly. The service must run on this target's clock.
class InProcessTarget final : public Target {
  public:
    InProcessTarget(Service& service, std::shared_ptr<ManualClock> clock);
    ~InProcessTarget() override;

    ObservedSet request(const std::string& external_id, int count, const std::optional<std::string>& user) override;
    bool click(const std::string& rec_id) override;
    bool has_virtual_time() const override { return true; }
    void set_time(UtcMillis t) override;
    UtcMillis time() const override { return m_clock->now(); }
    void inject_latency(std::chrono::milliseconds d) override { m_pending_latency = d; }

  private:
    Service& m_service;
    std::shared_ptr<ManualClock> m_clock;
    std::chrono::milliseconds m_pending_latency{0};
};

/// Talks HTTP to a running server, e.g. "http://127.0.0.1:8080". Safe to
/// share between worker threads (one connection per thread).
class UrlTarget final : public Target {
  public:
    explicit UrlTarget(std::string base_url);
    ~UrlTarget() override;

    ObservedSet request(const std::string& external_id, int count, const std::optional<std::string>& user) override;
    bool click(const std::string& rec_id) override;
    UtcMillis time() const override;

    /// Throws Error when the health endpoint cannot be reached.
    void check_reachable();

  private:
    std::string m_base;
    SystemClock m_clock;
};

std::unique_ptr<Target> make_url_target(const std::string& base_url);

}  // namespace raas::sim
