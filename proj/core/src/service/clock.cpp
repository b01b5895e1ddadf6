#include "raas/service/clock.hpp"

namespace raas {

SystemClock::SystemClock()
    : m_wall_anchor(std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now())),
      m_steady_anchor(std::chrono::steady_clock::now())
{
}

UtcMillis SystemClock::now() const
{
    auto elapsed = std::chrono::steady_clock::now() - m_steady_anchor;
    return m_wall_anchor + std::chrono::duration_cast<std::chrono::milliseconds>(elapsed);
}

}  // namespace raas
