#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "stylo/catalog.hpp"
#include "stylo/conllu.hpp"
#include "stylo/forest.hpp"
#include "stylo/rng.hpp"
#include "stylo/stats.hpp"
#include "stylo/tagger.hpp"

using namespace stylo;

namespace {

const std::vector<std::string> kLemmas = {"the", "report", "be", "write", "by", "committee", "and", "she",
                                          "can", "very", "development", "think", "that", "not", "slightly"};
const std::vector<std::string> kUpos = {"DET", "NOUN", "AUX", "VERB", "ADP", "NOUN", "CCONJ", "PRON",
                                        "AUX", "ADV", "NOUN", "VERB", "SCONJ", "PART", "ADV"};

// A document of `sentences` flat sentences of 15 words each.
AnnotatedDocument document(Rng& rng, std::size_t sentences) {
  AnnotatedDocument d;
  d.doc_id = "bench";
  for (std::size_t s = 0; s < sentences; ++s) {
    Sentence sent;
    for (int i = 0; i < 15; ++i) {
      const auto k = rng.below(kLemmas.size());
      Token t;
      t.index = i + 1;
      t.form = t.lemma = kLemmas[k];
      t.upos = kUpos[k];
      t.head = i == 0 ? 0 : 1;
      t.deprel = i == 0 ? "root" : "dep";
      sent.tokens.push_back(std::move(t));
    }
    d.sentences.push_back(std::move(sent));
  }
  return d;
}

void BM_Tag(benchmark::State& state) {
  const auto catalog = FeatureCatalog::load(STYLO_CATALOG_PATH);
  Rng rng(1);
  const auto doc = document(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tag(doc, catalog));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(doc.word_count()));
}
BENCHMARK(BM_Tag)->Arg(35)->Arg(350);

void BM_ForestTrain(benchmark::State& state) {
  std::vector<std::string> ids;
  for (int i = 1; i <= 66; ++i) ids.push_back((i < 10 ? "f_0" : "f_") + std::to_string(i));
  FeatureMatrix m(ids);
  Rng rng(2);
  for (int i = 0; i < 1500; ++i) {
    std::vector<double> v(66);
    for (auto& x : v) x = rng.normal();
    v[0] += i % 2 ? 1.5 : 0.0;
    m.add_row({"r" + std::to_string(i), i % 2 ? "llm" : "human_chunk2", 500, v});
  }
  ForestParams p;
  p.n_trees = static_cast<std::size_t>(state.range(0));
  p.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ForestModel::train(m, p));
}
BENCHMARK(BM_ForestTrain)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_WilcoxonExact(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> d(static_cast<std::size_t>(state.range(0)));
  for (auto& x : d) x = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(wilcoxon_signed_rank_diffs(d, WilcoxonMethod::Exact));
}
BENCHMARK(BM_WilcoxonExact)->Arg(12)->Arg(25);

}  // namespace

BENCHMARK_MAIN();
