#pragma once

#include "raas/bibliometrics/readership.hpp"
#include "raas/corpus/store.hpp"
#include "raas/randomizer.hpp"
#include "raas/service/clock.hpp"
#include "raas/service/config.hpp"
#include "raas/service/event_log.hpp"
#include "raas/service/ids.hpp"
#include "raas/text/index.hpp"

#include <array>
#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace raas {

/// One consistent version of everything a request reads.
struct Engine {
    std::shared_ptr<const CorpusSnapshot> corpus;
    std::optional<text::Index> index;  // absent for an empty corpus
    std::uint64_t version = 0;
    std::optional<StereotypeList> stereotypes;
    PopularityRanking popularity;
};

struct HealthStatus {
    std::string status = "ok";
    std::string version;
    std::size_t corpus_size = 0;
    std::uint64_t index_version = 0;
    double uptime_seconds = 0.0;
};

struct ServiceOptions {
    std::filesystem::path data_dir;  // empty: nothing persisted
    ServiceConfig config;
    std::shared_ptr<const Clock> clock;  // default: SystemClock
    std::shared_ptr<ReadershipProvider> provider;  // default: stub from config, if any
};

class Service {
  public:
    static constexpr int kDefaultCount = 10;
    static constexpr int kMinCount = 1;
    static constexpr int kMaxCount = 15;

    explicit Service(ServiceOptions options);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Throws ValidationError for a count outside [1, 15] and NotFoundError
    /// for an unknown document. The set is in the event log on return.
    RecommendationSet request_related(std::string_view external_id, std::optional<int> count = std::nullopt,
                                      std::optional<std::string> user_token = std::nullopt);

    /// Throws NotFoundError for an unknown rec_id.
    ClickEvent record_click(std::string_view rec_id);
    /// Throws NotFoundError for an unknown set_id.
    RenderEvent record_render(std::string_view set_id);

    [[nodiscard]] HealthStatus health() const;

    /// Ingests an export, rebuilds the index and swaps the engine. Throws
    /// IngestInProgress when another ingest is running.
    IngestReport ingest(std::istream& input, ExportFormat format);

    [[nodiscard]] std::shared_ptr<const Engine> engine() const;
    [[nodiscard]] LogSnapshot log_snapshot() { return m_log->snapshot(); }
    EventLog& event_log() { return *m_log; }
    [[nodiscard]] const Clock& clock() const { return *m_clock; }
    [[nodiscard]] const ServiceConfig& config() const { return m_config; }

    /// Called after the list is final and before the delivery time is taken.
    void set_before_delivery(std::function<void(const RecommendationSet&)> hook);

  private:
    using Token = std::array<std::uint64_t, 2>;
    struct TokenHash {
        std::size_t operator()(const Token& t) const noexcept { return t[0] ^ (t[1] * 0x9E3779B97F4A7C15ULL); }
    };
    struct RecInfo {
        Token set_id;
        std::int64_t delivered_at_ms;
    };

    static std::optional<Token> parse_token(std::string_view s);
    std::shared_ptr<const Engine> build_engine(std::shared_ptr<const CorpusSnapshot> corpus, std::uint64_t version,
                                               bool try_saved_index);
    void replay_log();
    void index_set(const RecommendationSet& set);
    std::uint64_t readership_of(const DocumentRecord& doc);

    ServiceConfig m_config;
    std::filesystem::path m_data_dir;
    std::shared_ptr<const Clock> m_clock;
    UtcMillis m_started;
    text::Analyzer m_analyzer;
    DocumentStore m_store;
    std::shared_ptr<ReadershipProvider> m_provider;
    std::unique_ptr<ReadershipCache> m_cache;
    std::unique_ptr<EventLog> m_log;

    mutable std::mutex m_engine_mutex;
    std::shared_ptr<const Engine> m_engine;
    std::mutex m_ingest_mutex;

    std::uint64_t m_master_seed;
    std::atomic<std::uint64_t> m_request_counter{0};
    IdGenerator m_ids;

    mutable std::shared_mutex m_index_mutex;
    std::unordered_map<Token, RecInfo, TokenHash> m_recs;
    std::unordered_set<Token, TokenHash> m_sets;

    std::function<void(const RecommendationSet&)> m_before_delivery;
};

/// Library version string.
const char* library_version();

}  // namespace raas
