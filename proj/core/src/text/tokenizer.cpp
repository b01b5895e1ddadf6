#include "raas/text/analyzer.hpp"
#include "raas/text/porter_stemmer.hpp"
#include "raas/unicode.hpp"

namespace raas::text {

std::vector<RawToken> Analyzer::raw_tokens(std::string_view text,
                                           const std::optional<std::string>& language) const
{
    std::vector<RawToken> out;
    const bool stem = stems(language);
    std::string word;
    auto flush = [&] {
        if (word.empty()) {
            return;
        }
        bool stop = m_stopwords.contains(word);
        out.push_back({stem ? porter_stem(word) : word, stop});
        word.clear();
    };
    unicode::for_each_code_point(unicode::nfc(text), [&](char32_t cp) {
        if (unicode::is_letter(cp) || unicode::is_digit(cp)) {
            unicode::append_utf8(word, unicode::fold_lower(cp));
        } else {
            flush();
        }
    });
    flush();
    return out;
}

std::vector<Token> Analyzer::tokenize(std::string_view text, bool stopword_filter,
                                      const std::optional<std::string>& language) const
{
    std::vector<Token> out;
    for (auto& raw : raw_tokens(text, language)) {
        if (stopword_filter && raw.is_stopword) {
            continue;
        }
        out.push_back({std::move(raw.term), static_cast<std::uint32_t>(out.size())});
    }
    return out;
}

}  // namespace raas::text
