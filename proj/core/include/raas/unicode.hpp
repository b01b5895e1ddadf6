#pragma once

#include <string>
#include <string_view>

namespace raas::unicode {

/// Lowercase every code point of a UTF-8 string. Invalid sequences become U+FFFD.
std::string to_lower(std::string_view utf8);

/// Trim Unicode whitespace at both ends and collapse internal runs to one ASCII space.
std::string collapse_whitespace(std::string_view utf8);

/// Canonical composition (NFC), so "e" + U+0301 becomes a single letter.
std::string nfc(std::string_view utf8);

/// True if the UTF-8 string is well formed.
bool is_valid_utf8(std::string_view bytes);

/// Calls fn(code_point) for every code point; invalid sequences yield U+FFFD.
template <typename Fn>
void for_each_code_point(std::string_view utf8, Fn&& fn);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);
char32_t fold_lower(char32_t cp);
void append_utf8(std::string& out, char32_t cp);

namespace detail {
    /// Decodes the code point at `pos`, advancing it. Returns U+FFFD on error.
    char32_t next_code_point(std::string_view utf8, std::size_t& pos);
}

template <typename Fn>
void for_each_code_point(std::string_view utf8, Fn&& fn)
{
    std::size_t pos = 0;
    while (pos < utf8.size()) {
        fn(detail::next_code_point(utf8, pos));
    }
}

}  // namespace raas::unicode
