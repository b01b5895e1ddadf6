#pragma once

#include "raas/corpus/document.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace raas {

/// Deduplication key of a title: Unicode letters only, lowercased, every
/// other character turned into a separator, separator runs collapsed to
/// one space, trimmed. Throws ValidationError("empty title") on blank input.
std::string clean_title(std::string_view title);

/// Case-insensitive list of placeholder author strings ("et al.", "Unknown", ...).
class NoiseList {
  public:
    /// The built-in list.
    NoiseList();
    explicit NoiseList(std::span<const std::string> entries);

    static NoiseList from_file(const std::string& path);

    [[nodiscard]] bool contains(std::string_view normalized_name) const;
    [[nodiscard]] const std::vector<std::string>& entries() const { return m_entries; }

    /// Matching key: lowercased with trailing '.', ',', ';', ':', '!', '?' removed.
    static std::string key(std::string_view name);

  private:
    std::vector<std::string> m_entries;
    std::vector<std::string> m_keys;  // sorted
};

const std::vector<std::string>& default_noise_authors();

AuthorName normalize_author(std::string_view raw, const NoiseList& noise);

/// Partition by (clean_title, year); members ascending, canonical = smallest id.
/// Groups are ordered by canonical id.
std::vector<DuplicateGroup> group_duplicates(std::span<const DocumentRecord> docs);

inline DuplicateKey duplicate_key(const DocumentRecord& doc) { return {doc.clean_title, doc.year}; }

}  // namespace raas
