#pragma once

#include "raas/service/service.hpp"

#include <memory>
#include <string>
#include <thread>

namespace raas {

/// JSON bodies shared by the HTTP surface and the CLI.
std::string ingest_report_json(const IngestReport& report);
std::string health_json(const HealthStatus& health);
std::string related_response_json(const RecommendationSet& set, const CorpusSnapshot& corpus);

/// HTTP/1.1 front end for a Service:
///
///   GET  /v1/documents/{external_id}/related?count=N&user=TOKEN  200 | 404 | 422
///   POST /v1/clicks/{rec_id}                                      204 | 404
///   GET  /v1/clicks/{rec_id}/beacon                               204 | 404
///   POST /v1/rendered/{set_id}                                    204 | 404
///   GET  /v1/health                                               200
///   POST /v1/ingest?format=jsonl|xml  (export as body)            200 | 409 | 422
class HttpServer {
  public:
    /// threads == 0 picks a pool large enough for keep-alive clients.
    explicit HttpServer(Service& service, int threads = 0);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds host:port (port 0 picks a free port) and returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); blocks the caller.
    void run();
    /// run() on a background thread; returns once the server accepts connections.
    void start();
    void stop();
    [[nodiscard]] int port() const { return m_port; }

  private:
    struct Impl;
    std::unique_ptr<Impl> m_impl;
    std::thread m_thread;
    int m_port = -1;
};

}  // namespace raas
