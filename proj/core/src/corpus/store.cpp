#include "raas/corpus/store.hpp"

#include "raas/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace raas {

using json = nlohmann::json;

CorpusSnapshot::CorpusSnapshot(std::vector<DocumentRecord> docs, DocId next_doc_id)
    : m_docs(std::move(docs)), m_next_doc_id(next_doc_id)
{
    std::sort(m_docs.begin(), m_docs.end(),
              [](const DocumentRecord& a, const DocumentRecord& b) { return a.doc_id < b.doc_id; });
    m_by_id.reserve(m_docs.size());
    m_by_external.reserve(m_docs.size());
    for (std::size_t i = 0; i < m_docs.size(); ++i) {
        m_by_id.emplace(m_docs[i].doc_id, i);
        m_by_external.emplace(m_docs[i].external_id, i);
        m_next_doc_id = std::max(m_next_doc_id, m_docs[i].doc_id + 1);
    }
    m_groups = group_duplicates(m_docs);
}

const DocumentRecord* CorpusSnapshot::find(DocId id) const
{
    auto it = m_by_id.find(id);
    return it == m_by_id.end() ? nullptr : &m_docs[it->second];
}

const DocumentRecord* CorpusSnapshot::find_external(std::string_view external_id) const
{
    auto it = m_by_external.find(std::string(external_id));
    return it == m_by_external.end() ? nullptr : &m_docs[it->second];
}

std::size_t CorpusSnapshot::duplicate_group_count() const
{
    return static_cast<std::size_t>(std::count_if(m_groups.begin(), m_groups.end(),
                                                  [](const auto& g) { return g.members.size() > 1; }));
}

std::string to_json_line(const DocumentRecord& doc)
{
    json authors = json::array();
    for (const auto& a : doc.authors) {
        authors.push_back({{"raw", a.raw}, {"normalized", a.normalized}, {"is_noise", a.is_noise}});
    }
    json j = {
        {"doc_id", doc.doc_id},
        {"external_id", doc.external_id},
        {"title", doc.title},
        {"clean_title", doc.clean_title},
        {"abstract", doc.abstract ? json(*doc.abstract) : json(nullptr)},
        {"authors", std::move(authors)},
        {"year", doc.year ? json(*doc.year) : json(nullptr)},
        {"language", doc.language ? json(*doc.language) : json(nullptr)},
        {"added_at", to_epoch_ms(doc.added_at)},
    };
    return j.dump();
}

DocumentRecord from_json_line(std::string_view line)
{
    auto j = json::parse(line);
    DocumentRecord doc;
    doc.doc_id = j.at("doc_id").get<DocId>();
    doc.external_id = j.at("external_id").get<std::string>();
    doc.title = j.at("title").get<std::string>();
    doc.clean_title = j.at("clean_title").get<std::string>();
    if (!j.at("abstract").is_null()) {
        doc.abstract = j["abstract"].get<std::string>();
    }
    for (const auto& a : j.at("authors")) {
        doc.authors.push_back({a.at("raw").get<std::string>(), a.at("normalized").get<std::string>(),
                               a.at("is_noise").get<bool>()});
    }
    if (!j.at("year").is_null()) {
        doc.year = j["year"].get<int>();
    }
    if (!j.at("language").is_null()) {
        doc.language = j["language"].get<std::string>();
    }
    doc.added_at = from_epoch_ms(j.at("added_at").get<std::int64_t>());
    return doc;
}

DocumentStore::DocumentStore() : m_snapshot(std::make_shared<CorpusSnapshot>()) {}

DocumentStore::DocumentStore(std::filesystem::path data_dir, NoiseList noise)
    : m_data_dir(std::move(data_dir)), m_noise(std::move(noise)),
      m_snapshot(std::make_shared<CorpusSnapshot>())
{
    if (!m_data_dir.empty()) {
        load();
    }
}

void DocumentStore::load()
{
    auto path = m_data_dir / kFileName;
    std::ifstream in(path);
    if (!in) {
        return;
    }
    std::vector<DocumentRecord> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            docs.push_back(from_json_line(line));
        } catch (const std::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    commit(std::make_shared<CorpusSnapshot>(std::move(docs), 1));
}

std::shared_ptr<const CorpusSnapshot> DocumentStore::snapshot() const
{
    std::lock_guard lock(m_snapshot_mutex);
    return m_snapshot;
}

void DocumentStore::commit(std::shared_ptr<const CorpusSnapshot> next)
{
    std::lock_guard lock(m_snapshot_mutex);
    m_snapshot = std::move(next);
}

void DocumentStore::persist(const CorpusSnapshot& snap) const
{
    if (m_data_dir.empty()) {
        return;
    }
    std::filesystem::create_directories(m_data_dir);
    auto final_path = m_data_dir / kFileName;
    auto tmp_path = final_path;
    tmp_path += ".tmp";
    {
        std::ofstream out(tmp_path, std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp_path.string());
        }
        for (const auto& doc : snap.documents()) {
            out << to_json_line(doc) << '\n';
        }
        out.flush();
        if (!out) {
            throw Error("write failed for " + tmp_path.string());
        }
    }
    std::filesystem::rename(tmp_path, final_path);
}

IngestReport DocumentStore::ingest(std::istream& input, ExportFormat format, UtcMillis now)
{
    std::unique_lock writer(m_writer_mutex, std::try_to_lock);
    if (!writer.owns_lock()) {
        throw IngestInProgress();
    }
    auto parsed = parse_export(input, format, utc_year(now));
    auto report = upsert_locked(std::move(parsed.drafts), now);
    parsed.report.noise_authors_flagged = report.noise_authors_flagged;
    parsed.report.duplicate_groups = report.duplicate_groups;
    return parsed.report;
}

IngestReport DocumentStore::ingest_drafts(std::vector<DocumentDraft> drafts, UtcMillis now)
{
    std::unique_lock writer(m_writer_mutex, std::try_to_lock);
    if (!writer.owns_lock()) {
        throw IngestInProgress();
    }
    return upsert_locked(std::move(drafts), now);
}

IngestReport DocumentStore::upsert_locked(std::vector<DocumentDraft> drafts, UtcMillis now)
{
    auto current = snapshot();
    std::vector<DocumentRecord> docs = current->documents();
    std::unordered_map<std::string, std::size_t> by_external;
    by_external.reserve(docs.size() + drafts.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        by_external.emplace(docs[i].external_id, i);
    }
    DocId next_id = current->next_doc_id();

    IngestReport report;
    for (auto& draft : drafts) {
        ++report.records_read;
        DocumentRecord doc;
        doc.external_id = std::move(draft.external_id);
        doc.clean_title = clean_title(draft.title);
        doc.title = std::move(draft.title);
        doc.abstract = std::move(draft.abstract);
        doc.year = draft.year;
        doc.language = std::move(draft.language);
        for (const auto& raw : draft.authors) {
            doc.authors.push_back(normalize_author(raw, m_noise));
            if (doc.authors.back().is_noise) {
                ++report.noise_authors_flagged;
            }
        }

        if (auto it = by_external.find(doc.external_id); it != by_external.end()) {
            auto& existing = docs[it->second];
            doc.doc_id = existing.doc_id;
            doc.added_at = existing.added_at;
            existing = std::move(doc);
        } else {
            doc.doc_id = next_id++;
            doc.added_at = now;
            by_external.emplace(doc.external_id, docs.size());
            docs.push_back(std::move(doc));
        }
        ++report.records_accepted;
    }

    auto next = std::make_shared<CorpusSnapshot>(std::move(docs), next_id);
    report.duplicate_groups = next->duplicate_group_count();
    persist(*next);
    commit(std::move(next));
    return report;
}

}  // namespace raas
