#pragma once

#include "raas/corpus/document.hpp"

#include <istream>
#include <optional>
#include <string_view>
#include <vector>

namespace raas {

enum class ExportFormat { Jsonl, Xml };

std::optional<ExportFormat> parse_export_format(std::string_view name);

struct ParseResult {
    std::vector<DocumentDraft> drafts;
    IngestReport report;  // counts + per-record errors; dedup fields left zero
};

/// Parses a partner export. Bad records are rejected individually and
/// parsing continues; only a failing stream is fatal (StreamError).
///
/// JSONL: one object per line with "id" and "title" required, "abstract",
/// "authors", "year", "language" optional, unknown keys ignored. Blank
/// lines are skipped without counting as records.
///
/// XML: a sequence of <document> elements with <id>, <title>, <abstract>,
/// repeatable <author>, <year> and <language> children, UTF-8 only.
///
/// `current_year` bounds the accepted publication year (1000..current_year + 1).
ParseResult parse_export(std::istream& input, ExportFormat format, int current_year);

}  // namespace raas
