#pragma once

#include "raas/corpus/document.hpp"
#include "raas/text/analyzer.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace raas::text {

/// Okapi BM25 constants.
struct ScoringParams {
    double k1 = 1.2;
    double b = 0.75;

    /// Throws ValidationError unless k1 > 0 and 0 <= b <= 1.
    void validate() const;
};

struct Posting {
    std::uint32_t doc;  // dense document position, see Index::doc_id()
    std::uint32_t tf;
};

using TermId = std::uint32_t;

/// Document-frequency table for multi-word grams, keyed by term ids.
template <std::size_t N>
struct GramTable {
    using Key = std::array<TermId, N>;
    std::vector<Key> keys;  // sorted, unique
    std::vector<std::uint32_t> df;

    [[nodiscard]] std::uint32_t lookup(const Key& key) const;
};

/// Immutable inverted index over title + abstract of every document.
///
/// Terms are the stopword-filtered, stemmed tokens produced by Analyzer.
/// Term ids follow lexicographic order of the term strings. Documents are
/// held at dense positions in ascending doc_id order.
class Index {
  public:
    Index() = default;
    Index(const Index&) = delete;
    Index& operator=(const Index&) = delete;
    Index(Index&&) noexcept = default;
    Index& operator=(Index&&) noexcept = default;

    /// Throws Error("empty corpus") when `docs` is empty.
    static Index build(std::span<const DocumentRecord> docs, const Analyzer& analyzer,
                       ScoringParams params = {}, std::uint64_t version = 1);

    [[nodiscard]] std::size_t doc_count() const { return m_doc_ids.size(); }
    [[nodiscard]] DocId doc_id(std::uint32_t pos) const { return m_doc_ids[pos]; }
    [[nodiscard]] const std::vector<DocId>& doc_ids() const { return m_doc_ids; }
    [[nodiscard]] std::optional<std::uint32_t> position_of(DocId id) const;

    [[nodiscard]] std::uint32_t doc_len(std::uint32_t pos) const { return m_doc_len[pos]; }
    [[nodiscard]] double avg_len() const { return m_avg_len; }

    [[nodiscard]] std::size_t term_count() const { return m_terms.size(); }
    [[nodiscard]] const std::string& term(TermId id) const { return m_terms[id]; }
    [[nodiscard]] std::optional<TermId> term_id(std::string_view term) const;

    [[nodiscard]] std::span<const Posting> postings(TermId id) const;
    [[nodiscard]] std::uint32_t df(TermId id) const
    {
        return static_cast<std::uint32_t>(m_offsets[id + 1] - m_offsets[id]);
    }

    /// Number of documents whose title or abstract contains the contiguous
    /// gram (1 to 3 term ids). Grams never span the title/abstract boundary.
    [[nodiscard]] std::uint32_t gram_df(std::span<const TermId> gram) const;

    /// ln(1 + (N - df + 0.5) / (df + 0.5))
    [[nodiscard]] double idf(std::uint32_t df) const;

    /// k1 * (1 - b + b * len / avg_len) for the document at `pos`.
    [[nodiscard]] double length_norm(std::uint32_t pos) const { return m_norm[pos]; }
    [[nodiscard]] double term_idf(TermId id) const { return m_idf[id]; }

    [[nodiscard]] const ScoringParams& params() const { return m_params; }
    [[nodiscard]] std::uint64_t version() const { return m_version; }

    /// Binary persistence with a magic header and format version.
    void save(const std::filesystem::path& path) const;
    /// Throws FormatError on a wrong magic header or format version.
    static Index load(const std::filesystem::path& path);

    static constexpr std::uint32_t kFormatVersion = 1;
    static constexpr const char* kFileName = "index.bin";

  private:
    void finalize();

    ScoringParams m_params;
    std::uint64_t m_version = 0;
    std::vector<DocId> m_doc_ids;
    std::vector<std::uint32_t> m_doc_len;
    double m_avg_len = 0.0;
    std::vector<std::string> m_terms;
    std::vector<std::uint64_t> m_offsets;  // CSR, size term_count + 1
    std::vector<Posting> m_postings;
    GramTable<2> m_bigrams;
    GramTable<3> m_trigrams;

    // Derived on build/load.
    std::unordered_map<std::string_view, TermId> m_term_lookup;
    std::unordered_map<DocId, std::uint32_t> m_position;
    std::vector<double> m_norm;
    std::vector<double> m_idf;

    friend struct IndexIo;
};

}  // namespace raas::text
