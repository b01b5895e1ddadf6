#include "raas/service/dedup.hpp"

#include <set>

namespace raas {

std::vector<DeliveredItem> dedup_delivered_list(std::vector<DeliveredItem> items, const DocumentRecord& source,
                                                const CorpusSnapshot& corpus)
{
    std::set<DuplicateKey> seen{duplicate_key(source)};
    std::vector<DeliveredItem> out;
    out.reserve(items.size());
    for (auto& item : items) {
        const auto* doc = corpus.find(item.doc_id);
        if (doc == nullptr || doc->doc_id == source.doc_id) {
            continue;
        }
        if (!seen.insert(duplicate_key(*doc)).second) {
            continue;
        }
        item.rank = static_cast<int>(out.size()) + 1;
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace raas
