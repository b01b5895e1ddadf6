#include "raas/service/http_server.hpp"

#include "raas/errors.hpp"

#include <algorithm>
#include <charconv>
#include <httplib.h>
#include <json.hpp>
#include <sstream>

namespace raas {

using json = nlohmann::json;

std::string ingest_report_json(const IngestReport& report)
{
    json errors = json::array();
    for (const auto& e : report.errors) {
        errors.push_back({{"locator", e.locator}, {"reason", e.reason}});
    }
    json j = {{"records_read", report.records_read},
              {"records_accepted", report.records_accepted},
              {"records_rejected", report.records_rejected},
              {"noise_authors_flagged", report.noise_authors_flagged},
              {"duplicate_groups", report.duplicate_groups},
              {"errors", std::move(errors)}};
    return j.dump();
}

std::string health_json(const HealthStatus& h)
{
    json j = {{"status", h.status},
              {"version", h.version},
              {"corpus_size", h.corpus_size},
              {"index_version", h.index_version},
              {"uptime_seconds", h.uptime_seconds}};
    return j.dump();
}

std::string related_response_json(const RecommendationSet& set, const CorpusSnapshot& corpus)
{
    json recs = json::array();
    for (const auto& item : set.items) {
        const auto* doc = corpus.find(item.doc_id);
        recs.push_back({{"rec_id", item.rec_id},
                        {"external_id", doc != nullptr ? doc->external_id : std::string{}},
                        {"title", doc != nullptr ? doc->title : std::string{}},
                        {"rank", item.rank},
                        {"relevance", item.relevance}});
    }
    json j = {{"set_id", set.set_id},
              {"processing_time_ms", set.processing_time_ms},
              {"fallback_used", set.fallback_used},
              {"algorithm", {{"sampled", set.sampled_fingerprint}, {"executed", set.executed_fingerprint}}},
              {"recommendations", std::move(recs)}};
    return j.dump();
}

namespace {

void error_body(httplib::Response& res, int status, const std::string& message)
{
    res.status = status;
    res.set_content(json{{"error", message}}.dump(), "application/json");
}

void no_cache(httplib::Response& res)
{
    res.set_header("Cache-Control", "no-store, no-cache, must-revalidate, max-age=0");
    res.set_header("Pragma", "no-cache");
    res.set_header("Expires", "0");
}

}  // namespace

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;

    Impl(Service& s, int threads) : service(s)
    {
        auto pool = static_cast<std::size_t>(threads > 0 ? threads
                                                         : std::max(32U, 4 * std::thread::hardware_concurrency()));
        server.new_task_queue = [pool] { return new httplib::ThreadPool(pool); };
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                    {"Access-Control-Allow-Headers", "Content-Type"}});
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                error_body(res, 500, e.what());
            } catch (...) {
                error_body(res, 500, "internal error");
            }
        });
        routes();
    }

    void routes()
    {
        server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.Get(R"(/v1/documents/(.+)/related)", [this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            std::optional<int> count;
            if (req.has_param("count")) {
                const auto text = req.get_param_value("count");
                int v = 0;
                auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
                if (ec != std::errc{} || ptr != text.data() + text.size()) {
                    error_body(res, 422, "count must be an integer between 1 and 15");
                    return;
                }
                count = v;
            }
            std::optional<std::string> user;
            if (req.has_param("user")) {
                user = req.get_param_value("user");
            }
            try {
                auto set = service.request_related(id, count, std::move(user));
                // The set may reference a newer engine after a concurrent swap.
                auto current = service.engine();
                res.set_content(related_response_json(set, *current->corpus), "application/json");
            } catch (const ValidationError& e) {
                error_body(res, 422, e.what());
            } catch (const NotFoundError& e) {
                error_body(res, 404, e.what());
            }
        });

        auto click = [this](const httplib::Request& req, httplib::Response& res) {
            no_cache(res);
            try {
                service.record_click(std::string(req.matches[1]));
                res.status = 204;
            } catch (const NotFoundError& e) {
                error_body(res, 404, e.what());
            }
        };
        server.Post(R"(/v1/clicks/([^/]+))", click);
        server.Get(R"(/v1/clicks/([^/]+)/beacon)", click);

        server.Post(R"(/v1/rendered/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                service.record_render(std::string(req.matches[1]));
                res.status = 204;
            } catch (const NotFoundError& e) {
                error_body(res, 404, e.what());
            }
        });

        server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
            no_cache(res);
            res.set_content(health_json(service.health()), "application/json");
        });

        server.Post("/v1/ingest", [this](const httplib::Request& req, httplib::Response& res) {
            ExportFormat format = ExportFormat::Jsonl;
            try {
                if (req.has_param("format")) {
                    auto parsed = parse_export_format(req.get_param_value("format"));
                    if (!parsed) {
                        error_body(res, 422, "format must be jsonl or xml");
                        return;
                    }
                    format = *parsed;
                }
                std::istringstream body(req.body);
                auto report = service.ingest(body, format);
                res.set_content(ingest_report_json(report), "application/json");
            } catch (const IngestInProgress& e) {
                error_body(res, 409, e.what());
            } catch (const ValidationError& e) {
                error_body(res, 422, e.what());
            }
        });
    }
};

HttpServer::HttpServer(Service& service, int threads) : m_impl(std::make_unique<Impl>(service, threads)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port)
{
    if (port == 0) {
        m_port = m_impl->server.bind_to_any_port(host);
    } else if (m_impl->server.bind_to_port(host, port)) {
        m_port = port;
    } else {
        m_port = -1;
    }
    if (m_port < 0) {
        throw Error("cannot bind " + host + ":" + std::to_string(port));
    }
    return m_port;
}

void HttpServer::run()
{
    m_impl->server.listen_after_bind();
}

void HttpServer::start()
{
    m_thread = std::thread([this] { run(); });
    m_impl->server.wait_until_ready();
}

void HttpServer::stop()
{
    m_impl->server.stop();
    if (m_thread.joinable()) {
        m_thread.join();
    }
}

}  // namespace raas
