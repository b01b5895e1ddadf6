#include "raas/randomizer.hpp"

#include "raas/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace raas {

namespace {

constexpr std::array kFields = {text::KeyphraseField::Title, text::KeyphraseField::Abstract,
                                text::KeyphraseField::TitleAbstract};
constexpr std::array kGrams = {text::GramSize::Uni, text::GramSize::Bi, text::GramSize::Tri, text::GramSize::Mixed};
constexpr std::array kMetrics = {BiblioMetric::Plain, BiblioMetric::ByAge, BiblioMetric::ByAuthors};
constexpr std::array kCombines = {CombineMode::BiblioOnly, CombineMode::Multiply, CombineMode::SumNormalized};
constexpr int kMaxKeyphrases = 20;

template <typename T, std::size_t N>
T pick(Rng& rng, const std::array<T, N>& options)
{
    return options[rng.below(N)];
}

}  // namespace

const char* class_token(RecipeClass c)
{
    switch (c) {
    case RecipeClass::Cbf:
        return "cbf";
    case RecipeClass::Stereotype:
        return "stereotype";
    case RecipeClass::MostPopular:
        return "most_popular";
    case RecipeClass::Random:
        return "random";
    }
    return "?";
}

void ClassWeights::validate() const
{
    for (double w : {cbf, stereotype, most_popular, random}) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw ValidationError("class weights must lie in [0, 1]");
        }
    }
    double sum = cbf + stereotype + most_popular + random;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("class weights must sum to 1, got " + std::to_string(sum));
    }
}

void RandomizerConfig::validate() const
{
    weights.validate();
    if (!(rerank_probability >= 0.0 && rerank_probability <= 1.0)) {
        throw ValidationError("rerank_probability must lie in [0, 1]");
    }
}

RecipeClass select_class(double u, const ClassWeights& w)
{
    double edge = w.cbf;
    if (u < edge) {
        return RecipeClass::Cbf;
    }
    edge += w.stereotype;
    if (u < edge) {
        return RecipeClass::Stereotype;
    }
    edge += w.most_popular;
    if (u < edge) {
        return RecipeClass::MostPopular;
    }
    if (w.random > 0.0) {
        return RecipeClass::Random;
    }
    // Rounding left u past the last positive weight; fall back to the last class that has mass.
    if (w.most_popular > 0.0) {
        return RecipeClass::MostPopular;
    }
    if (w.stereotype > 0.0) {
        return RecipeClass::Stereotype;
    }
    return RecipeClass::Cbf;
}

Recipe sample_recipe(Rng& rng, const RandomizerConfig& config)
{
    Recipe r;
    r.recipe_class = select_class(rng.uniform01(), config.weights);
    if (r.recipe_class == RecipeClass::Cbf) {
        CbfParams p;
        if (rng.below(2) == 1) {
            p.feature_source = FeatureSource::Keyphrases;
            p.keyphrase_field = pick(rng, kFields);
            p.gram_size = pick(rng, kGrams);
            p.num_keyphrases = static_cast<int>(rng.between(1, kMaxKeyphrases));
        }
        r.cbf = p;
        if (rng.bernoulli(config.rerank_probability)) {
            RerankConfig rr;
            rr.metric = pick(rng, kMetrics);
            rr.k = static_cast<int>(rng.between(RerankConfig::kMinPool, RerankConfig::kMaxPool));
            rr.combine = pick(rng, kCombines);
            r.rerank = rr;
        }
    }
    r.seed = rng.next_u64();
    return r;
}

std::string fingerprint(const Recipe& recipe)
{
    if (recipe.recipe_class != RecipeClass::Cbf) {
        return class_token(recipe.recipe_class);
    }
    std::string out = cbf_label(recipe.cbf.value_or(CbfParams{}));
    if (recipe.rerank) {
        out += "|rr|";
        out += metric_token(recipe.rerank->metric);
        out += '|';
        out += std::to_string(recipe.rerank->k);
        out += '|';
        out += combine_token(recipe.rerank->combine);
    }
    return out;
}

Recipe fallback_recipe()
{
    Recipe r;
    r.cbf = CbfParams::terms();
    return r;
}

std::vector<Recipe> enumerate_recipes()
{
    std::vector<CbfParams> cbfs{CbfParams::terms()};
    for (auto f : kFields) {
        for (auto g : kGrams) {
            for (int n = 1; n <= kMaxKeyphrases; ++n) {
                cbfs.push_back(CbfParams::keyphrases(f, g, n));
            }
        }
    }
    std::vector<std::optional<RerankConfig>> reranks{std::nullopt};
    for (auto m : kMetrics) {
        for (int k = RerankConfig::kMinPool; k <= RerankConfig::kMaxPool; ++k) {
            for (auto c : kCombines) {
                reranks.push_back(RerankConfig{m, k, c});
            }
        }
    }

    std::vector<Recipe> out;
    out.reserve(3 + cbfs.size() * reranks.size());
    for (const auto& p : cbfs) {
        for (const auto& rr : reranks) {
            Recipe r;
            r.cbf = p;
            r.rerank = rr;
            out.push_back(r);
        }
    }
    for (auto c : {RecipeClass::Stereotype, RecipeClass::MostPopular, RecipeClass::Random}) {
        Recipe r;
        r.recipe_class = c;
        out.push_back(r);
    }
    return out;
}

std::size_t recipe_space_size()
{
    constexpr std::size_t cbf = 1 + kFields.size() * kGrams.size() * kMaxKeyphrases;
    constexpr std::size_t rr =
        1 + kMetrics.size() * (RerankConfig::kMaxPool - RerankConfig::kMinPool + 1) * kCombines.size();
    return 3 + cbf * rr;
}

namespace {

CandidateList run(const Recipe& recipe, const DocumentRecord& source, const ExecutionContext& ctx, std::size_t limit)
{
    switch (recipe.recipe_class) {
    case RecipeClass::Cbf: {
        const auto params = recipe.cbf.value_or(CbfParams{});
        if (!recipe.rerank) {
            return recommend_cbf(source, params, *ctx.index, *ctx.analyzer, limit);
        }
        const auto& rr = *recipe.rerank;
        const auto pool = std::max(limit, static_cast<std::size_t>(rr.k));
        auto candidates = recommend_cbf(source, params, *ctx.index, *ctx.analyzer, pool);
        std::unordered_map<DocId, double> scores;
        const auto considered = std::min(candidates.items.size(), static_cast<std::size_t>(rr.k));
        for (std::size_t i = 0; i < considered; ++i) {
            const auto* doc = ctx.corpus->find(candidates.items[i].doc_id);
            if (doc == nullptr) {
                continue;
            }
            ReadershipRecord record{doc->doc_id, ctx.readership ? ctx.readership(*doc) : 0, {}, {}};
            scores[doc->doc_id] = bibliometric_score(*doc, record, rr.metric, ctx.ref_year);
        }
        return rerank(candidates, rr, scores, std::min(limit, static_cast<std::size_t>(rr.k)));
    }
    case RecipeClass::Stereotype:
        if (ctx.stereotypes == nullptr) {
            throw NoStereotypeConfigured();
        }
        return recommend_stereotype(*ctx.stereotypes, source.doc_id, limit);
    case RecipeClass::MostPopular: {
        static const PopularityRanking empty;
        return recommend_most_popular(ctx.popularity != nullptr ? *ctx.popularity : empty, source.doc_id, limit);
    }
    case RecipeClass::Random: {
        Rng rng(recipe.seed);
        return recommend_random(*ctx.corpus, source.doc_id, limit, rng);
    }
    }
    return {};
}

}  // namespace

ExecutionResult execute_recipe(const Recipe& recipe, const DocumentRecord& source, const ExecutionContext& ctx,
                               std::size_t limit)
{
    ExecutionResult result;
    result.sampled = fingerprint(recipe);
    try {
        result.list = run(recipe, source, ctx, limit);
        result.executed = result.sampled;
    } catch (const InsufficientKeyphrases&) {
        result.fallback_used = true;
    } catch (const NoStereotypeConfigured&) {
        result.fallback_used = true;
    }
    if (result.fallback_used) {
        auto fb = fallback_recipe();
        result.list = run(fb, source, ctx, limit);
        result.executed = fingerprint(fb);
    }
    return result;
}

}  // namespace raas
