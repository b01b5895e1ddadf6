#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace raas {

/// UTC wall time at millisecond resolution.
using UtcMillis = std::chrono::sys_time<std::chrono::milliseconds>;

inline std::int64_t to_epoch_ms(UtcMillis t) { return t.time_since_epoch().count(); }
inline UtcMillis from_epoch_ms(std::int64_t ms) { return UtcMillis{std::chrono::milliseconds{ms}}; }

/// "YYYY-MM-DD" of the UTC calendar day containing t.
std::string utc_date(UtcMillis t);

/// Gregorian year of t (UTC).
int utc_year(UtcMillis t);

}  // namespace raas
