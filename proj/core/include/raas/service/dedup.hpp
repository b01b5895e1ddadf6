#pragma once

#include "raas/corpus/store.hpp"
#include "raas/service/event_log.hpp"

#include <vector>

namespace raas {

/// Drops items sharing (clean_title, year) with the source or with a
/// better-ranked item, keeps relative order, and renumbers ranks 1..n.
/// Items whose document is not in the corpus are dropped too.
std::vector<DeliveredItem> dedup_delivered_list(std::vector<DeliveredItem> items, const DocumentRecord& source,
                                                const CorpusSnapshot& corpus);

}  // namespace raas
