#include "helpers.hpp"

#include "raas/errors.hpp"
#include "raas/recommenders.hpp"

#include <catch_amalgamated.hpp>

#include <fstream>
#include <set>

using namespace raas;
using test_support::make_doc;

namespace {

CorpusSnapshot small_corpus()
{
    return CorpusSnapshot(
        {
            make_doc(1, "Digital library search systems", std::string("Search in digital libraries.")),
            make_doc(2, "Digital library evaluation"),
            make_doc(3, "Graph mining for citation analysis"),
            make_doc(4, "Search engines for scholarly literature"),
            make_doc(5, "Cooking with vegetables"),
        },
        6);
}

}  // namespace

TEST_CASE("terms CBF ranks by BM25 and never returns the source", "[recommenders]")
{
    auto corpus = small_corpus();
    text::Analyzer a;
    auto index = text::Index::build(corpus.documents(), a);
    const auto& src = *corpus.find(1);
    auto list = recommend_cbf(src, CbfParams::terms(), index, a, 10);
    CHECK(list.producer == "cbf|terms");
    CHECK(list.source == 1);
    REQUIRE(list.items.size() == 2);
    CHECK(list.items[0].doc_id == 2);
    CHECK(list.items[1].doc_id == 4);
    CHECK(list.items[0].relevance > list.items[1].relevance);
}

TEST_CASE("keyphrase CBF needs enough phrases", "[recommenders]")
{
    auto corpus = small_corpus();
    text::Analyzer a;
    auto index = text::Index::build(corpus.documents(), a);
    const auto& src = *corpus.find(2);
    auto params = CbfParams::keyphrases(text::KeyphraseField::Title, text::GramSize::Uni, 2);
    auto list = recommend_cbf(src, params, index, a, 10);
    CHECK(list.producer == "cbf|kp|title|1|2");
    CHECK_FALSE(list.items.empty());

    auto too_many = CbfParams::keyphrases(text::KeyphraseField::Title, text::GramSize::Uni, 4);
    try {
        (void)recommend_cbf(src, too_many, index, a, 10);
        FAIL("expected InsufficientKeyphrases");
    } catch (const InsufficientKeyphrases& e) {
        CHECK(e.available() == 3);
    }
    auto abstract = CbfParams::keyphrases(text::KeyphraseField::Abstract, text::GramSize::Bi, 1);
    CHECK_THROWS_AS(recommend_cbf(src, abstract, index, a, 10), InsufficientKeyphrases);
    CHECK(cbf_label(CbfParams::keyphrases(text::KeyphraseField::TitleAbstract, text::GramSize::Mixed, 20))
          == "cbf|kp|title_abstract|mixed|20");
}

TEST_CASE("most popular orders by readers with doc_id ties", "[recommenders]")
{
    auto corpus = small_corpus();
    PopularityRanking ranking(corpus, {{1, 5}, {2, 50}, {3, 5}, {4, 0}});
    auto list = recommend_most_popular(ranking, DocId{2}, 3);
    CHECK(list.producer == "most_popular");
    REQUIRE(list.items.size() == 3);
    CHECK(list.items[0] == Candidate{1, 5.0});
    CHECK(list.items[1] == Candidate{3, 5.0});
    CHECK(list.items[2].doc_id == 4);
    CHECK(recommend_most_popular(ranking, std::nullopt, 1).items.at(0).doc_id == 2);
}

TEST_CASE("stereotype list in order without the source", "[recommenders]")
{
    StereotypeList list{{4, 1, 3}};
    auto out = recommend_stereotype(list, 1, 10);
    REQUIRE(out.items.size() == 2);
    CHECK(out.items[0] == Candidate{4, 1.0});
    CHECK(out.items[1] == Candidate{3, 0.5});
    CHECK_THROWS_AS(recommend_stereotype(StereotypeList{}, 1, 10), NoStereotypeConfigured);
}

TEST_CASE("stereotype list file skips unknown and repeated ids", "[recommenders]")
{
    test_support::TempDir dir;
    auto corpus = small_corpus();
    auto path = dir.path() / "stereo.txt";
    std::ofstream(path) << "# curated\ne3\ne9\n  e1  # comment\ne3\n\n";
    std::vector<std::string> skipped;
    auto list = StereotypeList::load(path, corpus, &skipped);
    CHECK(list.doc_ids == std::vector<DocId>{3, 1});
    CHECK(skipped == std::vector<std::string>{"e9", "e3"});
}

TEST_CASE("random recommender samples distinct documents excluding the source", "[recommenders]")
{
    auto corpus = small_corpus();
    std::vector<int> hits(6, 0);
    for (std::uint64_t s = 0; s < 4000; ++s) {
        Rng rng(s);
        auto list = recommend_random(corpus, 3, 2, rng);
        REQUIRE(list.items.size() == 2);
        CHECK(list.items[0].doc_id != list.items[1].doc_id);
        for (const auto& c : list.items) {
            REQUIRE(c.doc_id != 3);
            ++hits[c.doc_id];
        }
    }
    // Each of the 4 eligible docs appears in half of the draws.
    for (DocId d : {1, 2, 4, 5}) {
        CHECK(std::abs(hits[d] - 2000) < 150);
    }
    Rng a(9), b(9);
    CHECK(recommend_random(corpus, 1, 10, a).items == recommend_random(corpus, 1, 10, b).items);
    Rng c(1);
    CHECK(recommend_random(corpus, 99, 10, c).items.size() == 5);
}
