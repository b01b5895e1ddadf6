#pragma once

#include "raas/analytics/reports.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace raas::analytics {

enum class OutputFormat { Json, Csv, Table };

std::optional<OutputFormat> parse_output_format(std::string_view name);

/// CSV columns: bucket,impressions,clicks,ctr,wilson_lo,wilson_hi (empty
/// ctr and interval for buckets without impressions).
std::string format_report(const CtrReport& report, OutputFormat format);
std::string format_histogram(const DelayHistogram& histogram, OutputFormat format);
std::string format_time_series(const TimeSeries& series, OutputFormat format);

}  // namespace raas::analytics
