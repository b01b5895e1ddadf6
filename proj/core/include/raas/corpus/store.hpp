#pragma once

#include "raas/corpus/cleaning.hpp"
#include "raas/corpus/document.hpp"
#include "raas/corpus/parse.hpp"

#include <filesystem>
#include <istream>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace raas {

/// Immutable committed state of the store. Documents are ordered by doc_id.
class CorpusSnapshot {
  public:
    CorpusSnapshot() = default;
    CorpusSnapshot(std::vector<DocumentRecord> docs, DocId next_doc_id);

    [[nodiscard]] const std::vector<DocumentRecord>& documents() const { return m_docs; }
    [[nodiscard]] std::size_t size() const { return m_docs.size(); }
    [[nodiscard]] bool empty() const { return m_docs.empty(); }

    [[nodiscard]] const DocumentRecord* find(DocId id) const;
    [[nodiscard]] const DocumentRecord* find_external(std::string_view external_id) const;

    [[nodiscard]] const std::vector<DuplicateGroup>& duplicate_groups() const { return m_groups; }
    /// Groups with at least two members.
    [[nodiscard]] std::size_t duplicate_group_count() const;

    [[nodiscard]] DocId next_doc_id() const { return m_next_doc_id; }

  private:
    std::vector<DocumentRecord> m_docs;
    std::unordered_map<DocId, std::size_t> m_by_id;
    std::unordered_map<std::string, std::size_t> m_by_external;
    std::vector<DuplicateGroup> m_groups;
    DocId m_next_doc_id = 1;
};

/// The canonical document store: single writer, any number of readers.
/// Persisted as `documents.jsonl` under the data directory, rewritten
/// atomically (temp file + rename) at the end of each ingest.
class DocumentStore {
  public:
    /// In-memory store.
    DocumentStore();
    /// Loads `<data_dir>/documents.jsonl` if present. An empty path keeps it in memory.
    explicit DocumentStore(std::filesystem::path data_dir, NoiseList noise = NoiseList());

    [[nodiscard]] std::shared_ptr<const CorpusSnapshot> snapshot() const;

    /// parse -> normalize authors -> clean titles -> upsert by external_id ->
    /// regroup duplicates -> commit. Throws IngestInProgress if another
    /// ingest holds the writer lock.
    IngestReport ingest(std::istream& input, ExportFormat format, UtcMillis now);

    /// Upsert already-parsed drafts (the tail of ingest()).
    IngestReport ingest_drafts(std::vector<DocumentDraft> drafts, UtcMillis now);

    [[nodiscard]] const NoiseList& noise_list() const { return m_noise; }

    static constexpr const char* kFileName = "documents.jsonl";

  private:
    void commit(std::shared_ptr<const CorpusSnapshot> next);
    void persist(const CorpusSnapshot& snap) const;
    void load();
    IngestReport upsert_locked(std::vector<DocumentDraft> drafts, UtcMillis now);

    std::filesystem::path m_data_dir;
    NoiseList m_noise;
    mutable std::mutex m_snapshot_mutex;
    std::shared_ptr<const CorpusSnapshot> m_snapshot;
    std::mutex m_writer_mutex;
};

/// Serialisation of one stored record as a single JSON line (no trailing newline).
std::string to_json_line(const DocumentRecord& doc);
DocumentRecord from_json_line(std::string_view line);

}  // namespace raas
