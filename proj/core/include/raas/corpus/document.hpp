#pragma once

#include "raas/time.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace raas {

using DocId = std::uint64_t;

struct AuthorName {
    std::string raw;
    std::string normalized;
    bool is_noise = false;

    bool operator==(const AuthorName&) const = default;
};

/// One scholarly item as held by the canonical store.
struct DocumentRecord {
    DocId doc_id = 0;
    std::string external_id;
    std::string title;
    std::string clean_title;
    std::optional<std::string> abstract;
    std::vector<AuthorName> authors;
    std::optional<int> year;
    std::optional<std::string> language;
    UtcMillis added_at{};

    bool operator==(const DocumentRecord&) const = default;
};

/// A parsed but not yet stored record; authors are still raw strings.
struct DocumentDraft {
    std::string external_id;
    std::string title;
    std::optional<std::string> abstract;
    std::vector<std::string> authors;
    std::optional<int> year;
    std::optional<std::string> language;
};

struct IngestError {
    std::string locator;
    std::string reason;
};

struct IngestReport {
    std::size_t records_read = 0;
    std::size_t records_accepted = 0;
    std::size_t records_rejected = 0;
    std::size_t noise_authors_flagged = 0;
    std::size_t duplicate_groups = 0;
    std::vector<IngestError> errors;
};

struct DuplicateKey {
    std::string clean_title;
    std::optional<int> year;

    auto operator<=>(const DuplicateKey&) const = default;
};

struct DuplicateGroup {
    DuplicateKey key;
    std::vector<DocId> members;  // ascending
    DocId canonical = 0;
};

}  // namespace raas
