#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace raas::text {

/// English stopword list. Membership is tested on the lowercased surface form.
class StopwordList {
  public:
    /// The built-in list.
    StopwordList();
    explicit StopwordList(std::span<const std::string> words);

    /// One word per line; blank lines and '#' comments ignored.
    static StopwordList from_file(const std::string& path);

    [[nodiscard]] bool contains(std::string_view lowercase_word) const;
    [[nodiscard]] std::size_t size() const { return m_words.size(); }

  private:
    std::unordered_set<std::string> m_words;
};

const std::vector<std::string>& default_stopwords();

struct Token {
    std::string term;         // lowercased, stemmed when the language is English
    std::uint32_t position;   // 0-based, assigned after filtering

    bool operator==(const Token&) const = default;
};

/// A token before stopword filtering; used for contiguous n-gram extraction.
struct RawToken {
    std::string term;
    bool is_stopword;
};

/// Splits text on characters that are neither letters nor digits,
/// lowercases, optionally drops stopwords, and applies Porter stemming
/// unless the language is known and not English.
class Analyzer {
  public:
    Analyzer() = default;
    explicit Analyzer(StopwordList stopwords) : m_stopwords(std::move(stopwords)) {}

    [[nodiscard]] std::vector<Token> tokenize(std::string_view text, bool stopword_filter,
                                              const std::optional<std::string>& language = {}) const;

    [[nodiscard]] std::vector<RawToken> raw_tokens(std::string_view text,
                                                   const std::optional<std::string>& language = {}) const;

    [[nodiscard]] const StopwordList& stopwords() const { return m_stopwords; }

    static bool stems(const std::optional<std::string>& language)
    {
        return !language || *language == "en";
    }

  private:
    StopwordList m_stopwords;
};

}  // namespace raas::text
