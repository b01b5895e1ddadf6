#include "raas/time.hpp"

#include <cstdio>

namespace raas {

std::string utc_date(UtcMillis t)
{
    using namespace std::chrono;
    year_month_day ymd{floor<days>(t)};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

int utc_year(UtcMillis t)
{
    using namespace std::chrono;
    year_month_day ymd{floor<days>(t)};
    return static_cast<int>(ymd.year());
}

}  // namespace raas

