#include "raas/errors.hpp"
#include "raas/text/analyzer.hpp"
#include "raas/unicode.hpp"

#include <fstream>

namespace raas::text {

const std::vector<std::string>& default_stopwords()
{
    static const std::vector<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "also", "am", "an",
        "and", "any", "are", "as", "at", "be", "because", "been", "before", "being",
        "below", "between", "both", "but", "by", "can", "could", "did", "do", "does",
        "doing", "down", "during", "each", "either", "etc", "even", "ever", "every", "few",
        "for", "from", "further", "had", "has", "have", "having", "he", "her", "here",
        "hers", "herself", "him", "himself", "his", "how", "however", "i", "if", "in",
        "into", "is", "it", "its", "itself", "just", "let", "may", "me", "might",
        "more", "most", "must", "my", "myself", "neither", "no", "nor", "not", "now",
        "of", "off", "on", "once", "only", "or", "other", "ought", "our", "ours",
        "ourselves", "out", "over", "own", "per", "quite", "rather", "same", "shall", "she",
        "should", "since", "so", "some", "such", "than", "that", "the", "their", "theirs",
        "them", "themselves", "then", "there", "therefore", "these", "they", "this", "those", "though",
        "through", "thus", "to", "too", "under", "until", "up", "upon", "us", "very",
        "via", "was", "we", "were", "what", "whatever", "when", "where", "whereas", "whether",
        "which", "while", "who", "whom", "whose", "why", "will", "with", "within", "without",
        "would", "yet", "you", "your", "yours", "yourself", "yourselves", "among", "amongst", "around",
        "across", "along", "already", "although", "always", "another", "anyone", "anything", "become", "becomes",
        "cannot", "else", "enough", "especially",
    };
    return words;
}

StopwordList::StopwordList() : StopwordList(default_stopwords()) {}

StopwordList::StopwordList(std::span<const std::string> words)
{
    for (const auto& w : words) {
        m_words.insert(unicode::to_lower(w));
    }
}

StopwordList StopwordList::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open stopword list: " + path);
    }
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto w = unicode::collapse_whitespace(line);
        if (w.empty() || w.front() == '#') {
            continue;
        }
        words.push_back(w);
    }
    return StopwordList(words);
}

bool StopwordList::contains(std::string_view lowercase_word) const
{
    return m_words.find(std::string(lowercase_word)) != m_words.end();
}

}  // namespace raas::text
