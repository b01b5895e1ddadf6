#include "raas/corpus/cleaning.hpp"

#include "raas/errors.hpp"
#include "raas/unicode.hpp"

#include <algorithm>
#include <map>

namespace raas {

std::string clean_title(std::string_view title)
{
    bool blank = true;
    unicode::for_each_code_point(title, [&](char32_t cp) {
        if (!unicode::is_space(cp)) {
            blank = false;
        }
    });
    if (blank) {
        throw ValidationError("empty title");
    }

    std::string composed = unicode::nfc(title);
    std::string out;
    out.reserve(composed.size());
    bool pending_space = false;
    unicode::for_each_code_point(composed, [&](char32_t cp) {
        if (!unicode::is_letter(cp)) {
            pending_space = !out.empty();
            return;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        unicode::append_utf8(out, unicode::fold_lower(cp));
    });
    return out;
}

std::vector<DuplicateGroup> group_duplicates(std::span<const DocumentRecord> docs)
{
    std::map<DuplicateKey, std::vector<DocId>> buckets;
    for (const auto& doc : docs) {
        buckets[duplicate_key(doc)].push_back(doc.doc_id);
    }

    std::vector<DuplicateGroup> groups;
    groups.reserve(buckets.size());
    for (auto& [key, members] : buckets) {
        std::sort(members.begin(), members.end());
        DocId canonical = members.front();
        groups.push_back(DuplicateGroup{key, std::move(members), canonical});
    }
    std::sort(groups.begin(), groups.end(),
              [](const DuplicateGroup& a, const DuplicateGroup& b) { return a.canonical < b.canonical; });
    return groups;
}

}  // namespace raas
