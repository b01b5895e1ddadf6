#pragma once

#include "raas/corpus/store.hpp"
#include "raas/rng.hpp"
#include "raas/text/analyzer.hpp"
#include "raas/text/index.hpp"
#include "raas/text/keyphrases.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace raas {

enum class FeatureSource { Terms, Keyphrases };

/// Content-based filtering parameters. The keyphrase fields are only
/// meaningful when feature_source == Keyphrases.
struct CbfParams {
    FeatureSource feature_source = FeatureSource::Terms;
    text::KeyphraseField keyphrase_field = text::KeyphraseField::Title;
    text::GramSize gram_size = text::GramSize::Uni;
    int num_keyphrases = 1;  // 1..20

    static CbfParams terms() { return {}; }
    static CbfParams keyphrases(text::KeyphraseField field, text::GramSize gram, int count)
    {
        return {FeatureSource::Keyphrases, field, gram, count};
    }

    bool operator==(const CbfParams&) const = default;
};

struct Candidate {
    DocId doc_id;
    double relevance;

    bool operator==(const Candidate&) const = default;
};

struct CandidateList {
    DocId source = 0;
    std::vector<Candidate> items;
    std::string producer;
};

/// Operator-curated list recommended to everyone.
struct StereotypeList {
    std::vector<DocId> doc_ids;

    /// One external_id per line, '#' comments allowed. Unknown or repeated
    /// ids are skipped and reported through `skipped`.
    static StereotypeList load(const std::filesystem::path& path, const CorpusSnapshot& corpus,
                               std::vector<std::string>* skipped = nullptr);
};

/// Corpus ordered by external readership count (descending, ties by doc_id).
class PopularityRanking {
  public:
    PopularityRanking() = default;
    PopularityRanking(const CorpusSnapshot& corpus, const std::unordered_map<DocId, std::uint64_t>& readers);

    [[nodiscard]] const std::vector<std::pair<DocId, std::uint64_t>>& ranked() const { return m_ranked; }

  private:
    std::vector<std::pair<DocId, std::uint64_t>> m_ranked;
};

/// Producer label for a CBF parameterisation, e.g. "cbf|terms" or "cbf|kp|title|2|5".
std::string cbf_label(const CbfParams& params);

/// TERMS: the query is every token of title + abstract. KEYPHRASES: the
/// top num_keyphrases phrases, each contributing its grams as query terms.
/// Throws InsufficientKeyphrases when fewer phrases are available.
CandidateList recommend_cbf(const DocumentRecord& source, const CbfParams& params, const text::Index& index,
                            const text::Analyzer& analyzer, std::size_t limit);

/// Top `limit` documents by readership, excluding `source` when given.
CandidateList recommend_most_popular(const PopularityRanking& ranking, std::optional<DocId> source,
                                     std::size_t limit);

/// The curated list in order, minus the source, relevance = 1 / rank.
/// Throws NoStereotypeConfigured for an empty list.
CandidateList recommend_stereotype(const StereotypeList& list, DocId source, std::size_t limit);

/// Uniform sample without replacement from the corpus minus the source, in draw order.
CandidateList recommend_random(const CorpusSnapshot& corpus, DocId source, std::size_t limit, Rng& rng);

}  // namespace raas
