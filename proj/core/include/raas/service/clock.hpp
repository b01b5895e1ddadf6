#pragma once

#include "raas/time.hpp"

#include <atomic>
#include <chrono>

namespace raas {

class Clock {
  public:
    virtual ~Clock() = default;
    /// Current UTC time; never goes backwards.
    virtual UtcMillis now() const = 0;
};

/// Wall time taken once at construction, advanced by the steady clock so
/// intervals survive wall-clock adjustments.
class SystemClock final : public Clock {
  public:
    SystemClock();
    UtcMillis now() const override;

  private:
    UtcMillis m_wall_anchor;
    std::chrono::steady_clock::time_point m_steady_anchor;
};

/// Externally driven clock for simulations and tests.
class ManualClock final : public Clock {
  public:
    explicit ManualClock(UtcMillis start = from_epoch_ms(0)) : m_ms(to_epoch_ms(start)) {}

    UtcMillis now() const override { return from_epoch_ms(m_ms.load()); }
    void set(UtcMillis t) { m_ms.store(to_epoch_ms(t)); }
    void advance(std::chrono::milliseconds d) { m_ms.fetch_add(d.count()); }

  private:
    std::atomic<std::int64_t> m_ms;
};

}  // namespace raas
