#include "raas/corpus/parse.hpp"

#include "raas/errors.hpp"
#include "raas/unicode.hpp"

#include <expat.h>
#include <json.hpp>

#include <cctype>
#include <charconv>
#include <string>

namespace raas {

namespace {

using json = nlohmann::json;

std::optional<std::string> validate(DocumentDraft& draft, int current_year)
{
    if (draft.external_id.empty()) {
        return "missing id";
    }
    if (unicode::collapse_whitespace(draft.title).empty()) {
        return "missing title";
    }
    if (draft.year && (*draft.year < 1000 || *draft.year > current_year + 1)) {
        return "year out of range: " + std::to_string(*draft.year);
    }
    if (draft.language) {
        auto& lang = *draft.language;
        if (lang.size() != 2 || !std::isalpha(static_cast<unsigned char>(lang[0]))
            || !std::isalpha(static_cast<unsigned char>(lang[1]))) {
            return "invalid language code: " + lang;
        }
        for (auto& c : lang) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return std::nullopt;
}

void accept_or_reject(ParseResult& result, DocumentDraft draft, const std::string& locator,
                      int current_year)
{
    ++result.report.records_read;
    if (auto reason = validate(draft, current_year)) {
        ++result.report.records_rejected;
        result.report.errors.push_back({locator, *reason});
        return;
    }
    ++result.report.records_accepted;
    result.drafts.push_back(std::move(draft));
}

void reject(ParseResult& result, const std::string& locator, std::string reason)
{
    ++result.report.records_read;
    ++result.report.records_rejected;
    result.report.errors.push_back({locator, std::move(reason)});
}

// Returns a rejection reason, or fills `draft`.
std::optional<std::string> draft_from_json(const json& obj, DocumentDraft& draft)
{
    if (!obj.is_object()) {
        return "record is not a JSON object";
    }
    auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) {
        return "missing id";
    }
    draft.external_id = id->get<std::string>();

    auto title = obj.find("title");
    if (title == obj.end() || !title->is_string()) {
        return "missing title";
    }
    draft.title = title->get<std::string>();

    if (auto it = obj.find("abstract"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) {
            return "invalid field 'abstract'";
        }
        draft.abstract = it->get<std::string>();
    }
    if (auto it = obj.find("authors"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) {
            return "invalid field 'authors'";
        }
        for (const auto& a : *it) {
            if (!a.is_string()) {
                return "invalid field 'authors'";
            }
            draft.authors.push_back(a.get<std::string>());
        }
    }
    if (auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
            return "invalid field 'year'";
        }
        draft.year = it->get<int>();
    }
    if (auto it = obj.find("language"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) {
            return "invalid field 'language'";
        }
        draft.language = it->get<std::string>();
    }
    return std::nullopt;
}

void parse_jsonl(std::istream& input, ParseResult& result, int current_year)
{
    std::string line;
    std::size_t line_no = 0;
    std::size_t consumed = 0;
    while (std::getline(input, line)) {
        ++line_no;
        consumed += line.size() + (input.eof() ? 0 : 1);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (unicode::collapse_whitespace(line).empty()) {
            continue;
        }
        auto locator = "line " + std::to_string(line_no);
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) {
            reject(result, locator, "malformed JSON");
            continue;
        }
        DocumentDraft draft;
        if (auto reason = draft_from_json(obj, draft)) {
            reject(result, locator, *reason);
            continue;
        }
        accept_or_reject(result, std::move(draft), locator, current_year);
    }
    if (input.bad()) {
        throw StreamError("read failure in JSONL export", consumed);
    }
}

// One <document> element parsed with expat.
class XmlRecordParser {
  public:
    std::optional<std::string> parse(std::string_view chunk, DocumentDraft& draft)
    {
        XML_Parser parser = XML_ParserCreate("UTF-8");
        XML_SetUserData(parser, this);
        XML_SetElementHandler(parser, &XmlRecordParser::on_start, &XmlRecordParser::on_end);
        XML_SetCharacterDataHandler(parser, &XmlRecordParser::on_text);
        m_draft = &draft;
        auto status = XML_Parse(parser, chunk.data(), static_cast<int>(chunk.size()), 1);
        std::optional<std::string> error;
        if (status != XML_STATUS_OK) {
            error = std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser));
        } else if (m_error) {
            error = m_error;
        }
        XML_ParserFree(parser);
        return error;
    }

  private:
    static void on_start(void* self_ptr, const XML_Char* name, const XML_Char** /*attrs*/)
    {
        auto* self = static_cast<XmlRecordParser*>(self_ptr);
        ++self->m_depth;
        if (self->m_depth == 2) {
            self->m_field = name;
            self->m_text.clear();
        } else if (self->m_depth > 2 && !self->m_error) {
            self->m_error = "unexpected nested element <" + std::string(name) + ">";
        }
    }

    static void on_end(void* self_ptr, const XML_Char* /*name*/)
    {
        auto* self = static_cast<XmlRecordParser*>(self_ptr);
        if (self->m_depth == 2) {
            self->store_field();
        }
        --self->m_depth;
    }

    static void on_text(void* self_ptr, const XML_Char* s, int len)
    {
        auto* self = static_cast<XmlRecordParser*>(self_ptr);
        if (self->m_depth == 2) {
            self->m_text.append(s, static_cast<std::size_t>(len));
        }
    }

    void store_field()
    {
        auto& d = *m_draft;
        if (m_field == "id") {
            d.external_id = unicode::collapse_whitespace(m_text);
        } else if (m_field == "title") {
            d.title = m_text;
        } else if (m_field == "abstract") {
            d.abstract = m_text;
        } else if (m_field == "author") {
            d.authors.push_back(m_text);
        } else if (m_field == "year") {
            auto text = unicode::collapse_whitespace(m_text);
            int year = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), year);
            if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
                if (!m_error) {
                    m_error = "invalid field 'year'";
                }
            } else {
                d.year = year;
            }
        } else if (m_field == "language") {
            d.language = unicode::collapse_whitespace(m_text);
        }
    }

    DocumentDraft* m_draft = nullptr;
    int m_depth = 0;
    std::string m_field;
    std::string m_text;
    std::optional<std::string> m_error;
};

bool is_document_open_tag(std::string_view buf, std::size_t pos)
{
    constexpr std::string_view tag = "<document";
    auto after = pos + tag.size();
    if (after >= buf.size()) {
        return false;
    }
    char c = buf[after];
    return c == '>' || c == '/' || std::isspace(static_cast<unsigned char>(c)) != 0;
}

void parse_xml(std::istream& input, ParseResult& result, int current_year)
{
    constexpr std::string_view open_tag = "<document";
    constexpr std::string_view close_tag = "</document>";

    std::string buffer;
    std::size_t buffer_offset = 0;  // stream offset of buffer[0]
    std::size_t consumed = 0;
    std::size_t record_no = 0;
    bool eof = false;
    char block[1 << 16];

    auto refill = [&] {
        input.read(block, sizeof block);
        auto got = static_cast<std::size_t>(input.gcount());
        consumed += got;
        buffer.append(block, got);
        if (input.bad()) {
            throw StreamError("read failure in XML export", consumed);
        }
        if (got == 0 || input.eof()) {
            eof = true;
        }
    };

    std::size_t scan = 0;
    while (true) {
        auto start = buffer.find(open_tag, scan);
        while (start != std::string::npos && start + open_tag.size() < buffer.size()
               && !is_document_open_tag(buffer, start)) {
            start = buffer.find(open_tag, start + 1);
        }
        if (start == std::string::npos || start + open_tag.size() >= buffer.size()) {
            if (eof) {
                break;
            }
            // Keep a tail that might hold a partial open tag.
            auto keep_from = buffer.size() > open_tag.size() ? buffer.size() - open_tag.size() : 0;
            if (start != std::string::npos) {
                keep_from = std::min(keep_from, start);
            }
            buffer_offset += keep_from;
            buffer.erase(0, keep_from);
            scan = 0;
            refill();
            continue;
        }

        // Self-closing <document/> has no children.
        auto tag_end = buffer.find('>', start);
        while (tag_end == std::string::npos && !eof) {
            refill();
            tag_end = buffer.find('>', start);
        }
        std::size_t end = std::string::npos;
        if (tag_end != std::string::npos && buffer[tag_end - 1] == '/') {
            end = tag_end + 1;
        } else {
            auto close = buffer.find(close_tag, start);
            while (close == std::string::npos && !eof) {
                refill();
                close = buffer.find(close_tag, start);
            }
            if (close != std::string::npos) {
                end = close + close_tag.size();
            }
        }

        ++record_no;
        auto locator = "document " + std::to_string(record_no) + " (byte "
                       + std::to_string(buffer_offset + start) + ")";
        if (end == std::string::npos) {
            reject(result, locator, "truncated record");
            break;
        }

        std::string_view chunk(buffer.data() + start, end - start);
        DocumentDraft draft;
        XmlRecordParser parser;
        if (auto error = parser.parse(chunk, draft)) {
            reject(result, locator, *error);
        } else {
            accept_or_reject(result, std::move(draft), locator, current_year);
        }
        scan = end;
    }
}

}  // namespace

std::optional<ExportFormat> parse_export_format(std::string_view name)
{
    if (name == "jsonl" || name == "JSONL") {
        return ExportFormat::Jsonl;
    }
    if (name == "xml" || name == "XML") {
        return ExportFormat::Xml;
    }
    return std::nullopt;
}

ParseResult parse_export(std::istream& input, ExportFormat format, int current_year)
{
    ParseResult result;
    if (format == ExportFormat::Jsonl) {
        parse_jsonl(input, result, current_year);
    } else {
        parse_xml(input, result, current_year);
    }
    return result;
}

}  // namespace raas
