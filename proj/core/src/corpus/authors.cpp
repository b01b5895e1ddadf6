#include "raas/corpus/cleaning.hpp"

#include "raas/errors.hpp"
#include "raas/unicode.hpp"

#include <algorithm>
#include <fstream>

namespace raas {

const std::vector<std::string>& default_noise_authors()
{
    static const std::vector<std::string> list = {
        "et al.",  "and others", "AnoN.",   "Anonymous", "[Unknown]",
        "[[author]]???", "Unknown", "u.a.", "n.n.",      "n.a.",
    };
    return list;
}

NoiseList::NoiseList() : NoiseList(default_noise_authors()) {}

NoiseList::NoiseList(std::span<const std::string> entries) : m_entries(entries.begin(), entries.end())
{
    m_keys.reserve(m_entries.size());
    for (const auto& e : m_entries) {
        m_keys.push_back(key(unicode::collapse_whitespace(e)));
    }
    std::sort(m_keys.begin(), m_keys.end());
    m_keys.erase(std::unique(m_keys.begin(), m_keys.end()), m_keys.end());
}

NoiseList NoiseList::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open noise author list: " + path);
    }
    std::vector<std::string> entries;
    std::string line;
    while (std::getline(in, line)) {
        auto trimmed = unicode::collapse_whitespace(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        entries.push_back(trimmed);
    }
    return NoiseList(entries);
}

std::string NoiseList::key(std::string_view name)
{
    std::string k = unicode::to_lower(name);
    while (!k.empty()) {
        char c = k.back();
        if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == ' ') {
            k.pop_back();
        } else {
            break;
        }
    }
    return k;
}

bool NoiseList::contains(std::string_view normalized_name) const
{
    return std::binary_search(m_keys.begin(), m_keys.end(), key(normalized_name));
}

AuthorName normalize_author(std::string_view raw, const NoiseList& noise)
{
    AuthorName name;
    name.raw = std::string(raw);
    name.normalized = unicode::collapse_whitespace(raw);
    name.is_noise = name.normalized.empty() || noise.contains(name.normalized);
    return name;
}

}  // namespace raas
