#include "raas/corpus/cleaning.hpp"
#include "raas/corpus/store.hpp"
#include "raas/randomizer.hpp"
#include "raas/sim/corpus_generator.hpp"
#include "raas/text/analyzer.hpp"
#include "raas/text/index.hpp"
#include "raas/text/scoring.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <sstream>

namespace {

using namespace raas;

struct Corpus {
    std::shared_ptr<const CorpusSnapshot> snapshot;
    text::Analyzer analyzer;
    text::Index index;

    explicit Corpus(std::size_t n)
    {
        std::stringstream data;
        (void)sim::generate_corpus({n, 1}, data);
        DocumentStore store;
        store.ingest(data, ExportFormat::Jsonl, from_epoch_ms(1'700'000'000'000));
        snapshot = store.snapshot();
        index = text::Index::build(snapshot->documents(), analyzer);
    }
};

const Corpus& corpus_of(std::size_t n)
{
    static std::map<std::size_t, std::unique_ptr<Corpus>> cache;
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<Corpus>(n);
    }
    return *slot;
}

void BM_CleanTitle(benchmark::State& state)
{
    const std::string title = "Is Evaluating Visual Search Interfaces in Digital Libraries still an Issue? (2014)";
    for (auto _ : state) {
        benchmark::DoNotOptimize(clean_title(title));
    }
}
BENCHMARK(BM_CleanTitle);

void BM_Tokenize(benchmark::State& state)
{
    const auto& c = corpus_of(1000);
    const auto& doc = c.snapshot->documents()[7];
    const std::string text = doc.title + " " + doc.abstract.value_or("");
    for (auto _ : state) {
        benchmark::DoNotOptimize(c.analyzer.tokenize(text, true));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_SampleRecipe(benchmark::State& state)
{
    RandomizerConfig cfg;
    Rng rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_recipe(rng, cfg));
    }
}
BENCHMARK(BM_SampleRecipe);

void BM_ScoreRelated(benchmark::State& state)
{
    const auto& c = corpus_of(static_cast<std::size_t>(state.range(0)));
    const auto& docs = c.snapshot->documents();
    std::vector<std::vector<std::string>> queries;
    for (std::size_t i = 0; i < 64; ++i) {
        const auto& d = docs[(i * 7919) % docs.size()];
        std::vector<std::string> q;
        for (auto& t : c.analyzer.tokenize(d.title + " " + d.abstract.value_or(""), true)) {
            q.push_back(std::move(t.term));
        }
        queries.push_back(std::move(q));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(text::score_related(c.index, queries[i++ % queries.size()], std::nullopt, 30));
    }
}
BENCHMARK(BM_ScoreRelated)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
