#pragma once

#include "raas/corpus/document.hpp"
#include "raas/time.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

namespace raas {

struct DeliveredItem {
    std::string rec_id;
    DocId doc_id = 0;
    int rank = 0;
    double relevance = 0.0;

    bool operator==(const DeliveredItem&) const = default;
};

struct RecommendationSet {
    std::string set_id;
    DocId source = 0;
    std::string source_external_id;
    int requested_count = 0;
    std::vector<DeliveredItem> items;
    std::optional<std::string> user_token;
    UtcMillis received_at{};
    UtcMillis delivered_at{};
    std::int64_t processing_time_ms = 0;
    std::string sampled_fingerprint;
    std::string executed_fingerprint;
    bool fallback_used = false;

    bool operator==(const RecommendationSet&) const = default;
};

struct ClickEvent {
    std::string rec_id;
    std::string set_id;
    UtcMillis clicked_at{};
    std::int64_t delay_ms = 0;

    bool operator==(const ClickEvent&) const = default;
};

struct RenderEvent {
    std::string set_id;
    UtcMillis rendered_at{};

    bool operator==(const RenderEvent&) const = default;
};

using Event = std::variant<RecommendationSet, ClickEvent, RenderEvent>;

/// One JSON object per event, without the trailing newline.
std::string encode_event(const Event& event);
/// Throws FormatError on anything that is not a well-formed event line.
Event decode_event(std::string_view line);

/// Immutable view of a log, in append order.
struct LogSnapshot {
    std::vector<RecommendationSet> sets;
    std::vector<ClickEvent> clicks;
    std::vector<RenderEvent> renders;

    void add(Event event);
    [[nodiscard]] std::size_t impressions() const;
};

/// Streams every complete event of a log file. A torn final line (crash
/// mid-append) is ignored; a corrupt line elsewhere throws FormatError.
void for_each_event(const std::filesystem::path& path, const std::function<void(Event&&)>& fn);
LogSnapshot read_log(const std::filesystem::path& path);

/// Append-only event log. A single appender thread drains a bounded queue
/// and writes batches; append() returns once its record has reached the
/// file. The file is fsynced at most every `sync_interval` and on close.
/// An empty path keeps the log in memory.
class EventLog {
  public:
    explicit EventLog(std::filesystem::path path = {}, std::size_t queue_capacity = 4096,
                      std::chrono::milliseconds sync_interval = std::chrono::seconds(1));
    ~EventLog();

    EventLog(const EventLog&) = delete;
    EventLog& operator=(const EventLog&) = delete;

    void append(const Event& event);
    /// Blocks until everything appended so far is written and fsynced.
    void sync();
    [[nodiscard]] LogSnapshot snapshot();
    [[nodiscard]] const std::filesystem::path& path() const { return m_path; }

    static constexpr const char* kFileName = "events.jsonl";

  private:
    void run();
    void write_all(const std::string& bytes);
    void fsync_now();

    std::filesystem::path m_path;
    int m_fd = -1;
    std::size_t m_capacity;
    std::chrono::milliseconds m_sync_interval;

    std::mutex m_mutex;
    std::condition_variable m_not_full;
    std::condition_variable m_work;
    std::condition_variable m_written;
    std::deque<std::string> m_queue;
    std::uint64_t m_enqueued = 0;
    std::uint64_t m_written_seq = 0;
    std::uint64_t m_synced_seq = 0;
    bool m_sync_requested = false;
    bool m_stop = false;
    std::string m_failure;

    std::mutex m_memory_mutex;
    LogSnapshot m_memory;

    std::thread m_thread;
};

}  // namespace raas
