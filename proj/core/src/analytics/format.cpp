#include "raas/analytics/format.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <vector>

namespace raas::analytics {

using json = nlohmann::json;

std::optional<OutputFormat> parse_output_format(std::string_view name)
{
    if (name == "json") {
        return OutputFormat::Json;
    }
    if (name == "csv") {
        return OutputFormat::Csv;
    }
    if (name == "table") {
        return OutputFormat::Table;
    }
    return std::nullopt;
}

namespace {

std::string fixed(double v, int digits = 8)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string percent(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f%%", v * 100.0);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : rows) {
            width[c] = std::max(width[c], r[c].size());
        }
    }
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c > 0) {
                out += "  ";
            }
            // First column left-aligned, numbers right-aligned.
            const auto pad = std::string(width[c] - cells[c].size(), ' ');
            out += c == 0 ? cells[c] + pad : pad + cells[c];
        }
        while (!out.empty() && out.back() == ' ') {
            out.pop_back();
        }
        out += '\n';
    };
    line(header);
    std::vector<std::string> rule;
    for (auto w : width) {
        rule.emplace_back(w, '-');
    }
    line(rule);
    for (const auto& r : rows) {
        line(r);
    }
    return out;
}

json correlation_json(const Correlation& c)
{
    return {{"rho", c.rho}, {"p_value", c.p_value}, {"n", c.n}};
}

std::string correlation_line(const char* name, const Correlation& c)
{
    return std::string(name) + ": rho=" + fixed(c.rho, 4) + " p=" + fixed(c.p_value, 6) + " n=" + std::to_string(c.n)
           + "\n";
}

}  // namespace

std::string format_report(const CtrReport& report, OutputFormat format)
{
    switch (format) {
    case OutputFormat::Json: {
        json rows = json::array();
        for (const auto& r : report.rows) {
            json row = {{"bucket", r.bucket}, {"impressions", r.impressions}, {"clicks", r.clicks}};
            row["ctr"] = r.ctr ? json(*r.ctr) : json(nullptr);
            row["wilson95"] = r.wilson ? json::array({r.wilson->lo, r.wilson->hi}) : json(nullptr);
            rows.push_back(std::move(row));
        }
        json j = {{"dimension", dimension_name(report.dimension)}, {"rows", std::move(rows)}};
        if (report.spearman) {
            j["spearman"] = correlation_json(*report.spearman);
        }
        return j.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
        std::string out = "bucket,impressions,clicks,ctr,wilson_lo,wilson_hi\n";
        for (const auto& r : report.rows) {
            out += csv_field(r.bucket) + "," + std::to_string(r.impressions) + "," + std::to_string(r.clicks) + ",";
            if (r.ctr) {
                out += fixed(*r.ctr) + "," + fixed(r.wilson->lo) + "," + fixed(r.wilson->hi);
            } else {
                out += ",,";
            }
            out += "\n";
        }
        return out;
    }
    case OutputFormat::Table: {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : report.rows) {
            rows.push_back({r.bucket, std::to_string(r.impressions), std::to_string(r.clicks),
                            r.ctr ? percent(*r.ctr) : "-",
                            r.wilson ? percent(r.wilson->lo) + " - " + percent(r.wilson->hi) : "-"});
        }
        auto out = table({dimension_name(report.dimension), "impressions", "clicks", "ctr", "wilson95"}, rows);
        if (report.spearman) {
            out += correlation_line("spearman", *report.spearman);
        }
        return out;
    }
    }
    return {};
}

std::string format_histogram(const DelayHistogram& h, OutputFormat format)
{
    switch (format) {
    case OutputFormat::Json: {
        json buckets = json::array();
        for (const auto& b : h.buckets) {
            buckets.push_back({{"bucket", b.label}, {"count", b.count}, {"fraction", b.fraction}});
        }
        return json{{"total", h.total}, {"buckets", std::move(buckets)}}.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
        std::string out = "bucket,count,fraction\n";
        for (const auto& b : h.buckets) {
            out += b.label + "," + std::to_string(b.count) + "," + fixed(b.fraction) + "\n";
        }
        return out;
    }
    case OutputFormat::Table: {
        std::vector<std::vector<std::string>> rows;
        for (const auto& b : h.buckets) {
            rows.push_back({b.label, std::to_string(b.count), percent(b.fraction)});
        }
        return table({"delay", "clicks", "fraction"}, rows);
    }
    }
    return {};
}

std::string format_time_series(const TimeSeries& ts, OutputFormat format)
{
    switch (format) {
    case OutputFormat::Json: {
        json points = json::array();
        for (const auto& p : ts.points) {
            points.push_back({{"day", p.day}, {"impressions", p.impressions}, {"clicks", p.clicks}, {"ctr", p.ctr}});
        }
        return json{{"points", std::move(points)}, {"trend", correlation_json(ts.trend)}}.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
        std::string out = "day,impressions,clicks,ctr\n";
        for (const auto& p : ts.points) {
            out += p.day + "," + std::to_string(p.impressions) + "," + std::to_string(p.clicks) + "," + fixed(p.ctr)
                   + "\n";
        }
        return out;
    }
    case OutputFormat::Table: {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : ts.points) {
            rows.push_back({p.day, std::to_string(p.impressions), std::to_string(p.clicks), percent(p.ctr)});
        }
        return table({"day", "impressions", "clicks", "ctr"}, rows) + correlation_line("trend", ts.trend);
    }
    }
    return {};
}

}  // namespace raas::analytics
