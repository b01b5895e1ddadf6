#include "raas/analytics/format.hpp"
#include "raas/analytics/reports.hpp"
#include "raas/errors.hpp"
#include "raas/service/http_server.hpp"
#include "raas/service/service.hpp"
#include "raas/sim/corpus_generator.hpp"
#include "raas/sim/traffic.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace raas;

std::chrono::milliseconds parse_duration(const std::string& text)
{
    std::size_t pos = 0;
    double value = 0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ValidationError("bad duration: " + text);
    }
    const auto unit = text.substr(pos);
    double ms = 0;
    if (unit == "ms") {
        ms = value;
    } else if (unit == "s") {
        ms = value * 1e3;
    } else if (unit == "m" || unit == "min") {
        ms = value * 60e3;
    } else if (unit == "h" || unit.empty()) {
        ms = value * 3600e3;
    } else if (unit == "d") {
        ms = value * 86400e3;
    } else {
        throw ValidationError("bad duration unit: " + unit);
    }
    return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

ServiceConfig load_config(const std::string& path)
{
    return path.empty() ? ServiceConfig{} : ServiceConfig::load(path);
}

ExportFormat export_format(const std::string& name)
{
    auto f = parse_export_format(name);
    if (!f) {
        throw ValidationError("format must be jsonl or xml");
    }
    return *f;
}

int cmd_ingest(const std::string& data_dir, const std::string& input, const std::string& format,
               const std::string& config)
{
    ServiceOptions opts;
    opts.data_dir = data_dir;
    opts.config = load_config(config);
    Service service(std::move(opts));
    std::ifstream in(input, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + input);
    }
    auto report = service.ingest(in, export_format(format));
    std::cout << ingest_report_json(report) << '\n';
    return report.records_rejected == 0 ? 0 : 2;
}

HttpServer* g_server = nullptr;

void on_signal(int)
{
    if (g_server != nullptr) {
        g_server->stop();
    }
}

int cmd_serve(const std::string& host, int port, const std::string& data_dir, const std::string& config,
              int threads)
{
    ServiceOptions opts;
    opts.data_dir = data_dir;
    opts.config = load_config(config);
    if (threads > 0) {
        opts.config.threads = threads;
    }
    const int pool = opts.config.threads;
    Service service(std::move(opts));
    HttpServer server(service, pool);
    const auto bound = server.bind(host, port);
    std::cerr << "listening on " << host << ":" << bound << " (" << service.health().corpus_size
              << " documents)\n";
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.run();
    g_server = nullptr;
    service.event_log().sync();
    return 0;
}

int cmd_report(const std::string& dimension, const std::string& reshow_delay, const std::string& data_dir,
               const std::string& format)
{
    auto fmt = analytics::parse_output_format(format);
    if (!fmt) {
        throw ValidationError("format must be json, csv or table");
    }
    const auto log = read_log(std::filesystem::path(data_dir) / EventLog::kFileName);
    if (dimension == "delay") {
        std::cout << analytics::format_histogram(analytics::click_delay_histogram(log), *fmt);
        return 0;
    }
    if (dimension == "timeseries") {
        std::cout << analytics::format_time_series(analytics::ctr_time_series(log), *fmt);
        return 0;
    }
    auto dim = analytics::parse_dimension(dimension);
    if (!dim) {
        throw ValidationError("unknown dimension: " + dimension);
    }
    analytics::ReportOptions options;
    if (!reshow_delay.empty()) {
        options.reshow_delay_filter = parse_duration(reshow_delay);
    }
    std::cout << analytics::format_report(analytics::ctr_report(log, *dim, options), *fmt);
    return 0;
}

struct SimulateArgs {
    std::size_t corpus_size = 1000;
    std::size_t requests = 1000;
    std::size_t users = 100;
    std::uint64_t seed = 1;
    std::string model;
    std::string target = "inprocess";
    std::string out;
    std::string data_dir;
    std::string config;
    int count = 10;
    std::size_t workers = 1;
    std::size_t requests_per_day = 10000;
};

int cmd_simulate(const SimulateArgs& a)
{
    sim::SimConfig cfg;
    cfg.corpus_size = a.corpus_size;
    cfg.num_requests = a.requests;
    cfg.users = a.users;
    cfg.seed = a.seed;
    cfg.count = a.count;
    cfg.workers = a.workers;
    cfg.requests_per_day = a.requests_per_day;
    if (!a.model.empty()) {
        cfg.model = sim::ClickModel::load(a.model);
    }

    std::vector<std::string> sources;
    sim::Manifest manifest;
    if (a.target == "inprocess") {
        sim::CorpusGenConfig gen;
        gen.corpus_size = a.corpus_size;
        gen.seed = a.seed;
        std::stringstream corpus;
        sources = sim::generate_corpus(gen, corpus).external_ids;

        auto clock = std::make_shared<ManualClock>(cfg.start);
        ServiceOptions opts;
        opts.data_dir = a.data_dir;
        opts.config = load_config(a.config);
        if (!opts.config.seed) {
            opts.config.seed = a.seed;
        }
        opts.clock = clock;
        Service service(std::move(opts));
        service.ingest(corpus, ExportFormat::Jsonl);
        sim::InProcessTarget target(service, clock);
        manifest = sim::simulate_traffic(cfg, target, sources);
        service.event_log().sync();
    } else {
        for (std::size_t i = 0; i < a.corpus_size; ++i) {
            sources.push_back(sim::sim_external_id(i));
        }
        auto target = sim::make_url_target(a.target);
        manifest = sim::simulate_traffic(cfg, *target, sources);
    }

    const auto text = manifest.to_json_text();
    if (a.out.empty() || a.out == "-") {
        std::cout << text << '\n';
    } else {
        std::ofstream(a.out) << text << '\n';
    }
    std::cerr << manifest.requests << " requests, " << manifest.impressions << " impressions, " << manifest.clicks
              << " clicks\n";
    return manifest.failed_requests == 0 ? 0 : 3;
}

int cmd_generate(std::size_t size, std::uint64_t seed, bool pathological, const std::string& out,
                 const std::string& readership, const std::string& stereotypes, std::size_t stereotype_count)
{
    sim::CorpusGenConfig gen;
    gen.corpus_size = size;
    gen.seed = seed;
    gen.pathological = pathological;
    sim::GeneratedCorpus result;
    if (out.empty() || out == "-") {
        result = sim::generate_corpus(gen, std::cout);
    } else {
        std::ofstream f(out, std::ios::binary);
        result = sim::generate_corpus(gen, f);
    }
    if (!readership.empty()) {
        std::ofstream f(readership);
        sim::generate_readership_stub(result.external_ids, seed, f);
    }
    if (!stereotypes.empty()) {
        std::ofstream f(stereotypes);
        sim::generate_stereotype_list(result.external_ids, stereotype_count, seed, f);
    }
    std::cerr << size << " records, " << result.duplicate_pairs.size() << " duplicate pairs, "
              << result.noise_author_docs << " with noise authors\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Recommendations-as-a-service engine for scholarly documents"};
    app.require_subcommand(1);
    int rc = 0;

    std::string data_dir;
    std::string config;
    std::string ingest_format;
    std::string report_format;

    auto* ingest = app.add_subcommand("ingest", "Ingest a partner export and rebuild the index");
    std::string input;
    ingest->add_option("--data-dir", data_dir, "Data directory")->required();
    ingest->add_option("--input", input, "Export file")->required();
    ingest->add_option("--format", ingest_format, "jsonl or xml")->default_val("jsonl");
    ingest->add_option("--config", config, "Service config JSON");
    ingest->callback([&] { rc = cmd_ingest(data_dir, input, ingest_format, config); });

    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    int port = 8080;
    int threads = 0;
    std::string host = "127.0.0.1";
    serve->add_option("--port", port, "Port (0 picks a free one)")->default_val(8080);
    serve->add_option("--host", host, "Bind address")->default_val("127.0.0.1");
    serve->add_option("--data-dir", data_dir, "Data directory")->required();
    serve->add_option("--config", config, "Service config JSON");
    serve->add_option("--threads", threads, "Worker threads (0: automatic)");
    serve->callback([&] { rc = cmd_serve(host, port, data_dir, config, threads); });

    auto* report = app.add_subcommand("report", "CTR analytics over the event log");
    std::string dimension;
    std::string reshow_delay;
    report->add_option("--dimension", dimension, "algorithm|latency|setsize|reshow|day|scorectr|delay|timeseries")
        ->required();
    report->add_option("--reshow-delay", reshow_delay, "Reshow filter, e.g. 24h");
    report->add_option("--data-dir", data_dir, "Data directory")->required();
    report->add_option("--format", report_format, "json|csv|table")->default_val("table");
    report->callback([&] { rc = cmd_report(dimension, reshow_delay, data_dir, report_format); });

    auto* simulate = app.add_subcommand("simulate", "Generate traffic with a planted click model");
    SimulateArgs sa;
    simulate->add_option("--corpus-size", sa.corpus_size)->default_val(1000);
    simulate->add_option("--requests", sa.requests)->default_val(1000);
    simulate->add_option("--users", sa.users)->default_val(100);
    simulate->add_option("--seed", sa.seed)->default_val(1);
    simulate->add_option("--model", sa.model, "Click model JSON");
    simulate->add_option("--target", sa.target, "URL or inprocess")->default_val("inprocess");
    simulate->add_option("--out", sa.out, "Manifest path");
    simulate->add_option("--data-dir", sa.data_dir, "Data directory for the in-process service");
    simulate->add_option("--config", sa.config, "Service config for the in-process service");
    simulate->add_option("--count", sa.count, "Items per request (0: uniform 1..15)")->default_val(10);
    simulate->add_option("--workers", sa.workers, "Concurrent clients (URL targets)")->default_val(1);
    simulate->add_option("--requests-per-day", sa.requests_per_day)->default_val(10000);
    simulate->callback([&] { rc = cmd_simulate(sa); });

    auto* generate = app.add_subcommand("generate-corpus", "Write a synthetic JSONL corpus");
    std::size_t size = 1000;
    std::uint64_t seed = 1;
    bool pathological = false;
    std::string out;
    std::string readership;
    std::string stereotypes;
    std::size_t stereotype_count = 20;
    generate->add_option("--size", size)->default_val(1000);
    generate->add_option("--seed", seed)->default_val(1);
    generate->add_flag("--pathological", pathological, "One-word titles, no abstracts");
    generate->add_option("--out", out, "Output file (default stdout)");
    generate->add_option("--readership", readership, "Also write a readership stub");
    generate->add_option("--stereotypes", stereotypes, "Also write a stereotype list");
    generate->add_option("--stereotype-count", stereotype_count)->default_val(20);
    generate->callback([&] { rc = cmd_generate(size, seed, pathological, out, readership, stereotypes,
                                               stereotype_count); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
