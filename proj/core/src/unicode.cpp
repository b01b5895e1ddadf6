#include "raas/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <vector>

namespace raas::unicode {

namespace detail {
    char32_t next_code_point(std::string_view utf8, std::size_t& pos)
    {
        UChar32 c = 0;
        auto i = static_cast<int32_t>(pos);
        U8_NEXT(reinterpret_cast<const uint8_t*>(utf8.data()), i,
                static_cast<int32_t>(utf8.size()), c);
        pos = static_cast<std::size_t>(i);
        if (c < 0) {
            return 0xFFFD;
        }
        return static_cast<char32_t>(c);
    }
}  // namespace detail

bool is_letter(char32_t cp) { return u_isalpha(static_cast<UChar32>(cp)) != 0; }

bool is_digit(char32_t cp) { return u_isdigit(static_cast<UChar32>(cp)) != 0; }

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

char32_t fold_lower(char32_t cp) { return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))); }

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6U)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3FU)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12U)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3FU)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18U)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3FU)));
    }
}

std::string to_lower(std::string_view utf8)
{
    std::string out;
    out.reserve(utf8.size());
    for_each_code_point(utf8, [&](char32_t cp) { append_utf8(out, fold_lower(cp)); });
    return out;
}

std::string collapse_whitespace(std::string_view utf8)
{
    std::string out;
    out.reserve(utf8.size());
    bool pending_space = false;
    for_each_code_point(utf8, [&](char32_t cp) {
        if (is_space(cp)) {
            pending_space = !out.empty();
            return;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        append_utf8(out, cp);
    });
    return out;
}

std::string nfc(std::string_view utf8)
{
    bool ascii = true;
    for (char c : utf8) {
        if (static_cast<unsigned char>(c) >= 0x80) {
            ascii = false;
            break;
        }
    }
    if (ascii) {
        return std::string(utf8);
    }
    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* normalizer = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) {
        return std::string(utf8);
    }

    int32_t wide_len = 0;
    status = U_ZERO_ERROR;
    u_strFromUTF8WithSub(nullptr, 0, &wide_len, utf8.data(), static_cast<int32_t>(utf8.size()),
                         0xFFFD, nullptr, &status);
    std::vector<UChar> wide(static_cast<std::size_t>(wide_len) + 1);
    status = U_ZERO_ERROR;
    u_strFromUTF8WithSub(wide.data(), static_cast<int32_t>(wide.size()), &wide_len, utf8.data(),
                         static_cast<int32_t>(utf8.size()), 0xFFFD, nullptr, &status);
    if (U_FAILURE(status)) {
        return std::string(utf8);
    }
    if (unorm2_quickCheck(normalizer, wide.data(), wide_len, &status) == UNORM_YES
        && U_SUCCESS(status)) {
        return std::string(utf8);
    }

    status = U_ZERO_ERROR;
    std::vector<UChar> normalized(static_cast<std::size_t>(wide_len) * 3 + 1);
    auto norm_len = unorm2_normalize(normalizer, wide.data(), wide_len, normalized.data(),
                                     static_cast<int32_t>(normalized.size()), &status);
    if (U_FAILURE(status)) {
        return std::string(utf8);
    }

    std::string out;
    int32_t out_len = 0;
    status = U_ZERO_ERROR;
    u_strToUTF8(nullptr, 0, &out_len, normalized.data(), norm_len, &status);
    out.resize(static_cast<std::size_t>(out_len));
    status = U_ZERO_ERROR;
    u_strToUTF8(out.data(), out_len + 1, &out_len, normalized.data(), norm_len, &status);
    return out;
}

bool is_valid_utf8(std::string_view bytes)
{
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        UChar32 c = 0;
        auto i = static_cast<int32_t>(pos);
        U8_NEXT(reinterpret_cast<const uint8_t*>(bytes.data()), i,
                static_cast<int32_t>(bytes.size()), c);
        if (c < 0) {
            return false;
        }
        pos = static_cast<std::size_t>(i);
    }
    return true;
}

}  // namespace raas::unicode
