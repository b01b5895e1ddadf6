#pragma once

#include "raas/bibliometrics/rerank.hpp"
#include "raas/recommenders.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace raas {

enum class RecipeClass { Cbf, Stereotype, MostPopular, Random };

const char* class_token(RecipeClass c);

struct ClassWeights {
    double cbf = 0.90;
    double stereotype = 0.049;
    double most_popular = 0.049;
    double random = 0.002;

    /// Each weight in [0, 1] and the sum equal to 1 within 1e-9.
    void validate() const;
};

struct RandomizerConfig {
    ClassWeights weights;
    double rerank_probability = 0.5;

    void validate() const;
};

struct Recipe {
    RecipeClass recipe_class = RecipeClass::Cbf;
    std::optional<CbfParams> cbf;        // present iff class is Cbf
    std::optional<RerankConfig> rerank;  // only with Cbf
    std::uint64_t seed = 0;
    bool fallback_used = false;
};

/// Cumulative walk over the weights in the order CBF, STEREOTYPE,
/// MOST_POPULAR, RANDOM. u is a uniform draw in [0, 1).
RecipeClass select_class(double u, const ClassWeights& weights);

Recipe sample_recipe(Rng& rng, const RandomizerConfig& config);

/// Canonical text form, e.g. "cbf|kp|title|2|5|rr|plain|40|mult". Seed and
/// fallback flag are not part of it.
std::string fingerprint(const Recipe& recipe);

/// Terms-based CBF without re-ranking.
Recipe fallback_recipe();

/// Every distinct recipe of the finite parameter space (seed 0).
std::vector<Recipe> enumerate_recipes();

/// Number of recipes enumerate_recipes() yields.
std::size_t recipe_space_size();

/// Everything a recipe may need to run against one consistent engine version.
struct ExecutionContext {
    const CorpusSnapshot* corpus = nullptr;
    const text::Index* index = nullptr;
    const text::Analyzer* analyzer = nullptr;
    const StereotypeList* stereotypes = nullptr;
    const PopularityRanking* popularity = nullptr;
    /// Readership count for a document; used for re-ranking.
    std::function<std::uint64_t(const DocumentRecord&)> readership;
    int ref_year = 2000;
};

struct ExecutionResult {
    CandidateList list;
    bool fallback_used = false;
    std::string sampled;   // fingerprint of the sampled recipe
    std::string executed;  // fingerprint of the recipe that produced the list
};

/// Runs the recipe, falling back to terms-CBF when the sampled recipe
/// cannot be applied to the source (too few keyphrases, no stereotype list).
ExecutionResult execute_recipe(const Recipe& recipe, const DocumentRecord& source, const ExecutionContext& ctx,
                               std::size_t limit);

}  // namespace raas
