#pragma once

#include "raas/corpus/document.hpp"
#include "raas/time.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace raas {

struct ReadershipRecord {
    DocId doc_id = 0;
    std::uint64_t reader_count = 0;
    UtcMillis fetched_at{};
    std::string provider;
};

/// Source of external readership counts. A live client would match on
/// (title, year); the file-backed stub matches on external_id.
class ReadershipProvider {
  public:
    virtual ~ReadershipProvider() = default;

    /// std::nullopt when the provider knows nothing about the document.
    /// Throws ProviderUnavailable on transport failure.
    virtual std::optional<std::uint64_t> lookup(const DocumentRecord& doc) = 0;
    [[nodiscard]] virtual std::string label() const = 0;
};

/// JSONL stub: {"external_id": string, "readers": integer} per line.
/// The file is read on first lookup; a missing or unreadable file makes
/// every lookup fail with ProviderUnavailable until it can be read.
class FileStubProvider final : public ReadershipProvider {
  public:
    explicit FileStubProvider(std::filesystem::path path);

    std::optional<std::uint64_t> lookup(const DocumentRecord& doc) override;
    [[nodiscard]] std::string label() const override { return "file-stub"; }

    /// Number of lookups served so far.
    [[nodiscard]] std::uint64_t calls() const;

  private:
    void ensure_loaded();

    std::filesystem::path m_path;
    mutable std::mutex m_mutex;
    bool m_loaded = false;
    std::unordered_map<std::string, std::uint64_t> m_counts;
    std::uint64_t m_calls = 0;
};

struct ReadershipLookup {
    ReadershipRecord record;
    bool stale = false;      // served from an expired entry because the provider failed
    bool from_cache = false;
};

/// TTL cache of readership records, optionally persisted as append-only
/// JSONL (last entry per doc_id wins on load). Reads are concurrent;
/// writes are serialised. Provider calls are capped by `max_in_flight`.
class ReadershipCache {
  public:
    explicit ReadershipCache(std::chrono::milliseconds ttl = std::chrono::hours(24 * 30),
                             std::filesystem::path persist_path = {}, std::ptrdiff_t max_in_flight = 8);
    ~ReadershipCache();

    ReadershipCache(const ReadershipCache&) = delete;
    ReadershipCache& operator=(const ReadershipCache&) = delete;

    [[nodiscard]] std::optional<ReadershipRecord> peek(DocId id) const;
    void put(const ReadershipRecord& record);
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::chrono::milliseconds ttl() const { return m_ttl; }

    /// Snapshot of every cached count.
    [[nodiscard]] std::unordered_map<DocId, std::uint64_t> counts() const;

    std::counting_semaphore<>& in_flight() { return m_in_flight; }

    static constexpr const char* kFileName = "readership_cache.jsonl";

  private:
    std::chrono::milliseconds m_ttl;
    std::filesystem::path m_path;
    mutable std::shared_mutex m_mutex;
    std::unordered_map<DocId, ReadershipRecord> m_entries;
    std::mutex m_file_mutex;
    std::ofstream m_file;
    std::counting_semaphore<> m_in_flight;
};

/// Cache hit within TTL -> no provider call. Miss -> provider queried and
/// the result cached (unknown documents cache a count of 0). Provider
/// failure with an expired entry -> the entry, flagged stale. Provider
/// failure with no entry -> ProviderUnavailable propagates.
ReadershipLookup get_readership(ReadershipProvider& provider, const DocumentRecord& doc, ReadershipCache& cache,
                                UtcMillis now);

}  // namespace raas
