#include "raas/bibliometrics/readership.hpp"

#include "raas/errors.hpp"

#include <json.hpp>

namespace raas {

using json = nlohmann::json;

FileStubProvider::FileStubProvider(std::filesystem::path path) : m_path(std::move(path)) {}

void FileStubProvider::ensure_loaded()
{
    if (m_loaded) {
        return;
    }
    std::ifstream in(m_path);
    if (!in) {
        throw ProviderUnavailable("readership stub unreachable: " + m_path.string());
    }
    std::unordered_map<std::string, std::uint64_t> counts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            continue;
        }
        auto id = j.find("external_id");
        auto readers = j.find("readers");
        if (id == j.end() || !id->is_string() || readers == j.end() || !readers->is_number_integer()) {
            continue;
        }
        auto n = readers->get<std::int64_t>();
        counts[id->get<std::string>()] = n < 0 ? 0 : static_cast<std::uint64_t>(n);
    }
    if (in.bad()) {
        throw ProviderUnavailable("read failure on readership stub: " + m_path.string());
    }
    m_counts = std::move(counts);
    m_loaded = true;
}

std::optional<std::uint64_t> FileStubProvider::lookup(const DocumentRecord& doc)
{
    std::lock_guard lock(m_mutex);
    ensure_loaded();
    ++m_calls;
    auto it = m_counts.find(doc.external_id);
    if (it == m_counts.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::uint64_t FileStubProvider::calls() const
{
    std::lock_guard lock(m_mutex);
    return m_calls;
}

ReadershipCache::ReadershipCache(std::chrono::milliseconds ttl, std::filesystem::path persist_path,
                                 std::ptrdiff_t max_in_flight)
    : m_ttl(ttl), m_path(std::move(persist_path)), m_in_flight(max_in_flight < 1 ? 1 : max_in_flight)
{
    if (m_path.empty()) {
        return;
    }
    if (std::ifstream in(m_path); in) {
        std::string line;
        while (std::getline(in, line)) {
            auto j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) {
                continue;  // torn tail line
            }
            ReadershipRecord r;
            r.doc_id = j.value("doc_id", DocId{0});
            r.reader_count = j.value("readers", std::uint64_t{0});
            r.fetched_at = from_epoch_ms(j.value("fetched_at", std::int64_t{0}));
            r.provider = j.value("provider", std::string{});
            m_entries[r.doc_id] = std::move(r);
        }
    }
    if (m_path.has_parent_path()) {
        std::filesystem::create_directories(m_path.parent_path());
    }
    m_file.open(m_path, std::ios::app);
}

ReadershipCache::~ReadershipCache() = default;

std::optional<ReadershipRecord> ReadershipCache::peek(DocId id) const
{
    std::shared_lock lock(m_mutex);
    auto it = m_entries.find(id);
    if (it == m_entries.end()) {
        return std::nullopt;
    }
    return it->second;
}

void ReadershipCache::put(const ReadershipRecord& record)
{
    {
        std::unique_lock lock(m_mutex);
        m_entries[record.doc_id] = record;
    }
    if (m_file.is_open()) {
        json j = {{"doc_id", record.doc_id},
                  {"readers", record.reader_count},
                  {"fetched_at", to_epoch_ms(record.fetched_at)},
                  {"provider", record.provider}};
        std::lock_guard lock(m_file_mutex);
        m_file << j.dump() << '\n';
        m_file.flush();
    }
}

std::size_t ReadershipCache::size() const
{
    std::shared_lock lock(m_mutex);
    return m_entries.size();
}

std::unordered_map<DocId, std::uint64_t> ReadershipCache::counts() const
{
    std::shared_lock lock(m_mutex);
    std::unordered_map<DocId, std::uint64_t> out;
    out.reserve(m_entries.size());
    for (const auto& [id, r] : m_entries) {
        out.emplace(id, r.reader_count);
    }
    return out;
}

ReadershipLookup get_readership(ReadershipProvider& provider, const DocumentRecord& doc, ReadershipCache& cache,
                                UtcMillis now)
{
    auto cached = cache.peek(doc.doc_id);
    if (cached && now - cached->fetched_at <= cache.ttl()) {
        return {*cached, false, true};
    }

    std::optional<std::uint64_t> count;
    try {
        cache.in_flight().acquire();
        struct Release {
            std::counting_semaphore<>& s;
            ~Release() { s.release(); }
        } release{cache.in_flight()};
        count = provider.lookup(doc);
    } catch (const ProviderUnavailable&) {
        if (cached) {
            return {*cached, true, true};
        }
        throw;
    }

    ReadershipRecord record{doc.doc_id, count.value_or(0), now, provider.label()};
    cache.put(record);
    return {record, false, false};
}

}  // namespace raas
