#include "helpers.hpp"

#include "raas/errors.hpp"
#include "raas/randomizer.hpp"

#include <catch_amalgamated.hpp>

#include <map>
#include <set>

using namespace raas;
using test_support::make_doc;

TEST_CASE("rng engine and bounded draws", "[randomizer]")
{
    Rng std_seed(5489);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) {
        x = std_seed.next_u64();
    }
    CHECK(x == 9981545732273789042ULL);

    Rng rng(1);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        auto v = rng.below(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(std::abs(c - 10000) < 500);
    }
    for (int i = 0; i < 1000; ++i) {
        auto u = rng.uniform01();
        CHECK((u >= 0.0 && u < 1.0));
        auto b = rng.between(10, 100);
        CHECK((b >= 10 && b <= 100));
    }
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("class selection walks cumulative weights", "[randomizer]")
{
    ClassWeights w;
    CHECK(select_class(0.0, w) == RecipeClass::Cbf);
    CHECK(select_class(0.5, w) == RecipeClass::Cbf);
    CHECK(select_class(0.8999, w) == RecipeClass::Cbf);
    CHECK(select_class(0.92, w) == RecipeClass::Stereotype);
    CHECK(select_class(0.95, w) == RecipeClass::MostPopular);
    CHECK(select_class(0.999, w) == RecipeClass::Random);
    CHECK(select_class(0.9999999999, w) == RecipeClass::Random);

    ClassWeights no_random{0.5, 0.25, 0.25, 0.0};
    CHECK(select_class(0.9999999999999999, no_random) == RecipeClass::MostPopular);
}

TEST_CASE("weights and rerank probability are validated", "[randomizer]")
{
    CHECK_NOTHROW(ClassWeights{}.validate());
    CHECK_THROWS_AS((ClassWeights{0.9, 0.1, 0.1, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((ClassWeights{1.1, -0.1, 0.0, 0.0}.validate()), ValidationError);
    RandomizerConfig cfg;
    cfg.rerank_probability = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("fingerprints", "[randomizer]")
{
    Recipe r;
    r.cbf = CbfParams::keyphrases(text::KeyphraseField::Title, text::GramSize::Bi, 5);
    r.rerank = RerankConfig{BiblioMetric::Plain, 40, CombineMode::Multiply};
    r.seed = 123;
    CHECK(fingerprint(r) == "cbf|kp|title|2|5|rr|plain|40|mult");
    r.seed = 456;
    r.fallback_used = true;
    CHECK(fingerprint(r) == "cbf|kp|title|2|5|rr|plain|40|mult");
    CHECK(fingerprint(fallback_recipe()) == "cbf|terms");

    Recipe mp;
    mp.recipe_class = RecipeClass::MostPopular;
    CHECK(fingerprint(mp) == "most_popular");
    mp.recipe_class = RecipeClass::Stereotype;
    CHECK(fingerprint(mp) == "stereotype");
    mp.recipe_class = RecipeClass::Random;
    CHECK(fingerprint(mp) == "random");
}

TEST_CASE("recipe space is enumerated without collisions", "[randomizer]")
{
    auto all = enumerate_recipes();
    CHECK(all.size() == recipe_space_size());
    CHECK(recipe_space_size() == 3 + 241 * 820);
    std::set<std::string> seen;
    for (const auto& r : all) {
        seen.insert(fingerprint(r));
    }
    CHECK(seen.size() == all.size());
}

TEST_CASE("sample_recipe is reproducible and covers every dimension", "[randomizer]")
{
    RandomizerConfig cfg;
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        auto x = sample_recipe(a, cfg);
        auto y = sample_recipe(b, cfg);
        CHECK(fingerprint(x) == fingerprint(y));
        CHECK(x.seed == y.seed);
    }

    Rng rng(7);
    std::map<RecipeClass, int> classes;
    int kp = 0, rr = 0, cbf = 0;
    std::set<int> ks, ns;
    for (int i = 0; i < 50000; ++i) {
        auto r = sample_recipe(rng, cfg);
        ++classes[r.recipe_class];
        CHECK(r.cbf.has_value() == (r.recipe_class == RecipeClass::Cbf));
        if (!r.cbf) {
            CHECK_FALSE(r.rerank);
            continue;
        }
        ++cbf;
        if (r.cbf->feature_source == FeatureSource::Keyphrases) {
            ++kp;
            ns.insert(r.cbf->num_keyphrases);
        }
        if (r.rerank) {
            ++rr;
            ks.insert(r.rerank->k);
        }
    }
    CHECK(std::abs(classes[RecipeClass::Cbf] - 45000) < 300);
    CHECK(std::abs(kp - cbf / 2) < 400);
    CHECK(std::abs(rr - cbf / 2) < 400);
    CHECK(ks.size() == 91);
    CHECK(*ks.begin() == 10);
    CHECK(*ks.rbegin() == 100);
    CHECK(ns.size() == 20);
}

namespace {

struct Fixture {
    CorpusSnapshot corpus{{
                              make_doc(1, "Digital library search", std::string("Search digital libraries quickly.")),
                              make_doc(2, "Digital library evaluation", {}, 2010),
                              make_doc(3, "Search engines", {}, 2015),
                              make_doc(4, "Library", {}, 2016),
                          },
                          5};
    text::Analyzer analyzer;
    text::Index index = text::Index::build(corpus.documents(), analyzer);
    StereotypeList stereo{{4, 3}};
    PopularityRanking popularity{corpus, {{2, 9}, {3, 3}}};

    ExecutionContext ctx(bool with_stereo = true)
    {
        ExecutionContext c;
        c.corpus = &corpus;
        c.index = &index;
        c.analyzer = &analyzer;
        c.stereotypes = with_stereo ? &stereo : nullptr;
        c.popularity = &popularity;
        c.readership = [](const DocumentRecord& d) -> std::uint64_t { return d.doc_id == 3 ? 50 : 1; };
        c.ref_year = 2016;
        return c;
    }
};

}  // namespace

TEST_CASE("execute_recipe runs each class", "[randomizer]")
{
    Fixture f;
    const auto& src = *f.corpus.find(1);
    auto cbf = execute_recipe(fallback_recipe(), src, f.ctx(), 10);
    CHECK_FALSE(cbf.fallback_used);
    CHECK(cbf.sampled == "cbf|terms");
    CHECK(cbf.executed == "cbf|terms");
    CHECK(cbf.list.items.size() == 3);

    Recipe rr = fallback_recipe();
    rr.rerank = RerankConfig{BiblioMetric::Plain, 10, CombineMode::BiblioOnly};
    auto reranked = execute_recipe(rr, src, f.ctx(), 10);
    CHECK(reranked.executed == "cbf|terms|rr|plain|10|biblio");
    REQUIRE_FALSE(reranked.list.items.empty());
    CHECK(reranked.list.items[0].doc_id == 3);

    Recipe stereo;
    stereo.recipe_class = RecipeClass::Stereotype;
    auto s = execute_recipe(stereo, src, f.ctx(), 10);
    CHECK(s.executed == "stereotype");
    CHECK(s.list.items.size() == 2);

    Recipe mp;
    mp.recipe_class = RecipeClass::MostPopular;
    auto p = execute_recipe(mp, src, f.ctx(), 2);
    CHECK(p.list.items.at(0).doc_id == 2);
    CHECK(p.list.items.size() == 2);

    Recipe rnd;
    rnd.recipe_class = RecipeClass::Random;
    rnd.seed = 3;
    auto r1 = execute_recipe(rnd, src, f.ctx(), 10);
    auto r2 = execute_recipe(rnd, src, f.ctx(), 10);
    CHECK(r1.list.items == r2.list.items);
    CHECK(r1.list.items.size() == 3);
}

TEST_CASE("inapplicable recipes fall back to terms CBF", "[randomizer]")
{
    Fixture f;
    const auto& src = *f.corpus.find(4);  // one-word title, no abstract
    Recipe kp;
    kp.cbf = CbfParams::keyphrases(text::KeyphraseField::Title, text::GramSize::Uni, 5);
    auto out = execute_recipe(kp, src, f.ctx(), 10);
    CHECK(out.fallback_used);
    CHECK(out.sampled == "cbf|kp|title|1|5");
    CHECK(out.executed == "cbf|terms");
    CHECK(out.list.producer == "cbf|terms");

    Recipe stereo;
    stereo.recipe_class = RecipeClass::Stereotype;
    auto s = execute_recipe(stereo, *f.corpus.find(1), f.ctx(false), 10);
    CHECK(s.fallback_used);
    CHECK(s.sampled == "stereotype");
    CHECK(s.executed == "cbf|terms");
}
