#include "raas/service/event_log.hpp"

#include "raas/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <json.hpp>
#include <unistd.h>

namespace raas {

using json = nlohmann::json;

namespace {

json encode(const RecommendationSet& s)
{
    json items = json::array();
    for (const auto& it : s.items) {
        items.push_back({{"rec_id", it.rec_id}, {"doc_id", it.doc_id}, {"rank", it.rank}, {"relevance", it.relevance}});
    }
    json j = {{"type", "set"},
              {"set_id", s.set_id},
              {"source", s.source},
              {"source_external_id", s.source_external_id},
              {"requested_count", s.requested_count},
              {"received_at", to_epoch_ms(s.received_at)},
              {"delivered_at", to_epoch_ms(s.delivered_at)},
              {"processing_time_ms", s.processing_time_ms},
              {"sampled", s.sampled_fingerprint},
              {"executed", s.executed_fingerprint},
              {"fallback_used", s.fallback_used},
              {"items", std::move(items)}};
    if (s.user_token) {
        j["user"] = *s.user_token;
    }
    return j;
}

json encode(const ClickEvent& c)
{
    return {{"type", "click"},
            {"rec_id", c.rec_id},
            {"set_id", c.set_id},
            {"clicked_at", to_epoch_ms(c.clicked_at)},
            {"delay_ms", c.delay_ms}};
}

json encode(const RenderEvent& r)
{
    return {{"type", "render"}, {"set_id", r.set_id}, {"rendered_at", to_epoch_ms(r.rendered_at)}};
}

}  // namespace

std::string encode_event(const Event& event)
{
    return std::visit([](const auto& e) { return encode(e).dump(); }, event);
}

Event decode_event(std::string_view line)
{
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw FormatError("event line is not a JSON object");
    }
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "set") {
            RecommendationSet s;
            s.set_id = j.at("set_id").get<std::string>();
            s.source = j.at("source").get<DocId>();
            s.source_external_id = j.value("source_external_id", std::string{});
            s.requested_count = j.at("requested_count").get<int>();
            s.received_at = from_epoch_ms(j.at("received_at").get<std::int64_t>());
            s.delivered_at = from_epoch_ms(j.at("delivered_at").get<std::int64_t>());
            s.processing_time_ms = j.at("processing_time_ms").get<std::int64_t>();
            s.sampled_fingerprint = j.at("sampled").get<std::string>();
            s.executed_fingerprint = j.at("executed").get<std::string>();
            s.fallback_used = j.at("fallback_used").get<bool>();
            if (auto u = j.find("user"); u != j.end()) {
                s.user_token = u->get<std::string>();
            }
            for (const auto& it : j.at("items")) {
                s.items.push_back({it.at("rec_id").get<std::string>(), it.at("doc_id").get<DocId>(),
                                   it.at("rank").get<int>(), it.at("relevance").get<double>()});
            }
            return s;
        }
        if (type == "click") {
            return ClickEvent{j.at("rec_id").get<std::string>(), j.at("set_id").get<std::string>(),
                              from_epoch_ms(j.at("clicked_at").get<std::int64_t>()),
                              j.at("delay_ms").get<std::int64_t>()};
        }
        if (type == "render") {
            return RenderEvent{j.at("set_id").get<std::string>(),
                               from_epoch_ms(j.at("rendered_at").get<std::int64_t>())};
        }
        throw FormatError("unknown event type: " + type);
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad event line: ") + e.what());
    }
}

void LogSnapshot::add(Event event)
{
    std::visit(
        [this](auto&& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, RecommendationSet>) {
                sets.push_back(std::move(e));
            } else if constexpr (std::is_same_v<T, ClickEvent>) {
                clicks.push_back(std::move(e));
            } else {
                renders.push_back(std::move(e));
            }
        },
        std::move(event));
}

std::size_t LogSnapshot::impressions() const
{
    std::size_t n = 0;
    for (const auto& s : sets) {
        n += s.items.size();
    }
    return n;
}

void for_each_event(const std::filesystem::path& path, const std::function<void(Event&&)>& fn)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const bool terminated = !in.eof();
        if (line.empty()) {
            continue;
        }
        if (!terminated) {
            // Final line without newline: a record torn by a crash unless it parses.
            try {
                fn(decode_event(line));
            } catch (const FormatError&) {
            }
            break;
        }
        try {
            fn(decode_event(line));
        } catch (const FormatError& e) {
            throw FormatError(path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

LogSnapshot read_log(const std::filesystem::path& path)
{
    LogSnapshot snap;
    for_each_event(path, [&](Event&& e) { snap.add(std::move(e)); });
    return snap;
}

EventLog::EventLog(std::filesystem::path path, std::size_t queue_capacity, std::chrono::milliseconds sync_interval)
    : m_path(std::move(path)), m_capacity(queue_capacity == 0 ? 1 : queue_capacity), m_sync_interval(sync_interval)
{
    if (m_path.empty()) {
        return;
    }
    if (m_path.has_parent_path()) {
        std::filesystem::create_directories(m_path.parent_path());
    }
    m_fd = ::open(m_path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (m_fd < 0) {
        throw Error("cannot open event log " + m_path.string() + ": " + std::strerror(errno));
    }
    // An unterminated tail is either a complete record missing its newline
    // or a record torn by a crash; the latter is cut off.
    if (auto size = std::filesystem::file_size(m_path); size > 0) {
        std::ifstream in(m_path, std::ios::binary);
        std::string tail;
        std::uintmax_t pos = size;
        std::size_t newline = std::string::npos;
        while (pos > 0 && newline == std::string::npos) {
            const auto chunk = std::min<std::uintmax_t>(pos, 1 << 16);
            pos -= chunk;
            std::string block(chunk, '\0');
            in.seekg(static_cast<std::streamoff>(pos));
            in.read(block.data(), static_cast<std::streamsize>(chunk));
            tail.insert(0, block);
            if (tail.back() == '\n') {
                break;
            }
            newline = tail.rfind('\n');
        }
        if (tail.back() != '\n') {
            const auto start = newline == std::string::npos ? 0 : newline + 1;
            bool complete = true;
            try {
                (void)decode_event(std::string_view(tail).substr(start));
            } catch (const FormatError&) {
                complete = false;
            }
            if (complete) {
                write_all("\n");
            } else if (::ftruncate(m_fd, static_cast<off_t>(pos + start)) != 0) {
                throw Error("cannot truncate event log " + m_path.string() + ": " + std::strerror(errno));
            }
        }
    }
    m_thread = std::thread([this] { run(); });
}

EventLog::~EventLog()
{
    if (m_fd < 0) {
        return;
    }
    {
        std::lock_guard lock(m_mutex);
        m_stop = true;
    }
    m_work.notify_all();
    m_thread.join();
    ::close(m_fd);
}

void EventLog::write_all(const std::string& bytes)
{
    const char* p = bytes.data();
    std::size_t left = bytes.size();
    while (left > 0) {
        auto n = ::write(m_fd, p, left);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw Error("event log write failed: " + std::string(std::strerror(errno)));
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
}

void EventLog::fsync_now()
{
    ::fsync(m_fd);
}

void EventLog::run()
{
    auto last_sync = std::chrono::steady_clock::now();
    bool dirty = false;
    std::unique_lock lock(m_mutex);
    for (;;) {
        m_work.wait_for(lock, m_sync_interval,
                        [this] { return m_stop || !m_queue.empty() || m_sync_requested; });
        std::string batch;
        std::uint64_t upto = m_enqueued;
        while (!m_queue.empty()) {
            batch += m_queue.front();
            batch += '\n';
            m_queue.pop_front();
        }
        const bool want_sync = m_sync_requested || m_stop;
        m_sync_requested = false;
        const bool stopping = m_stop;
        lock.unlock();
        m_not_full.notify_all();

        std::string failure;
        bool synced = false;
        try {
            if (!batch.empty()) {
                write_all(batch);
                dirty = true;
            }
            auto now = std::chrono::steady_clock::now();
            if (want_sync || (dirty && now - last_sync >= m_sync_interval)) {
                fsync_now();
                last_sync = now;
                dirty = false;
                synced = true;
            }
        } catch (const std::exception& e) {
            failure = e.what();
        }

        lock.lock();
        m_written_seq = upto;
        if (synced || !failure.empty()) {
            m_synced_seq = upto;
        }
        if (!failure.empty()) {
            m_failure = failure;
        }
        m_written.notify_all();
        if (stopping && m_queue.empty()) {
            return;
        }
    }
}

void EventLog::append(const Event& event)
{
    if (m_fd < 0) {
        std::lock_guard lock(m_memory_mutex);
        m_memory.add(event);
        return;
    }
    auto line = encode_event(event);
    std::unique_lock lock(m_mutex);
    m_not_full.wait(lock, [this] { return m_queue.size() < m_capacity || m_stop; });
    if (m_stop) {
        throw Error("event log closed");
    }
    m_queue.push_back(std::move(line));
    const auto seq = ++m_enqueued;
    m_work.notify_one();
    m_written.wait(lock, [&] { return m_written_seq >= seq; });
    if (!m_failure.empty()) {
        throw Error(m_failure);
    }
}

void EventLog::sync()
{
    if (m_fd < 0) {
        return;
    }
    std::unique_lock lock(m_mutex);
    const auto seq = m_enqueued;
    m_sync_requested = true;
    m_work.notify_one();
    m_written.wait(lock, [&] { return m_synced_seq >= seq; });
}

LogSnapshot EventLog::snapshot()
{
    if (m_fd < 0) {
        std::lock_guard lock(m_memory_mutex);
        return m_memory;
    }
    {
        // Wait for queued records so the snapshot covers every completed append.
        std::unique_lock lock(m_mutex);
        const auto seq = m_enqueued;
        m_written.wait(lock, [&] { return m_written_seq >= seq; });
    }
    return read_log(m_path);
}

}  // namespace raas
