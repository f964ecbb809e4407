#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "stylo/chunking.hpp"
#include "stylo/conllu.hpp"
#include "stylo/error.hpp"
#include "stylo/tagger.hpp"

using namespace stylo;

namespace {

const FeatureCatalog& catalog() {
  static const auto c = FeatureCatalog::load(fixture::catalog_path());
  return c;
}

const std::vector<Sentence>& pool() {
  static const auto p = synth::sentence_pool();
  return p;
}

// Random document drawn from the annotated sentence pool, short enough that
// the type-token window covers all of it.
AnnotatedDocument pooled_document(Rng& rng, std::size_t n_sentences) {
  AnnotatedDocument d;
  d.doc_id = "d";
  d.source.name = "human_chunk2";
  for (std::size_t i = 0; i < n_sentences; ++i) d.sentences.push_back(pool()[rng.below(pool().size())]);
  return d;
}

bool same_value(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_SUITE("prop_text") {
  TEST_CASE("feature vector invariants") {
    Rng rng(1);
    for (int trial = 0; trial < 150; ++trial) {
      const auto doc = pooled_document(rng, 1 + rng.below(15));
      const auto fv = tag(doc, catalog());
      REQUIRE(fv.values.size() == kBiberFeatureCount);
      CHECK(fv.word_count == oracle::words(doc));
      for (std::size_t i = 0; i < catalog().size(); ++i) {
        const auto& def = catalog()[i];
        if (def.kind == FeatureKind::Index) {
          CHECK(fv.raw_counts[i] == -1);
          continue;
        }
        CHECK(fv.values[i] >= 0);
        CHECK(fv.raw_counts[i] >= 0);
        // value = raw count / words * 1000, and the count is recoverable.
        const double back = fv.values[i] * static_cast<double>(fv.word_count) / 1000.0;
        CHECK(std::fabs(back - static_cast<double>(fv.raw_counts[i])) < 1e-9);
      }
      const double ttr = fv.values[*catalog().index_of("f_43")];
      CHECK(ttr > 0);
      CHECK(ttr <= 1);
      CHECK(ttr == doctest::Approx(oracle::type_token_ratio(doc, kTypeTokenWindow)));
      CHECK(fv.values[*catalog().index_of("f_44")] > 0);
    }
  }

  TEST_CASE("sentence order does not matter") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
      auto doc = pooled_document(rng, 2 + rng.below(14));
      const auto before = tag(doc, catalog());
      rng.shuffle(doc.sentences);
      const auto after = tag(doc, catalog());
      CHECK(before.raw_counts == after.raw_counts);
      for (std::size_t i = 0; i < before.values.size(); ++i) CHECK(same_value(before.values[i], after.values[i]));
    }
  }

  TEST_CASE("rule counts add over concatenation") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = pooled_document(rng, 1 + rng.below(10));
      const auto b = pooled_document(rng, 1 + rng.below(10));
      auto ab = a;
      ab.sentences.insert(ab.sentences.end(), b.sentences.begin(), b.sentences.end());
      const auto fa = tag(a, catalog()), fb = tag(b, catalog()), fab = tag(ab, catalog());
      CHECK(fab.word_count == fa.word_count + fb.word_count);
      for (std::size_t i = 0; i < catalog().size(); ++i) {
        if (catalog()[i].kind == FeatureKind::Index) continue;
        CHECK(fab.raw_counts[i] == fa.raw_counts[i] + fb.raw_counts[i]);
      }
    }
  }

  TEST_CASE("evidence spans recheck against their rules") {
    Rng rng(4);
    std::size_t spans = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto doc = pooled_document(rng, 1 + rng.below(12));
      const auto tagged = tag_with_evidence(doc, catalog());
      std::vector<long> per_feature(catalog().size(), 0);
      for (const auto& s : tagged.evidence) {
        const auto idx = catalog().index_of(s.feature_id);
        REQUIRE(idx.has_value());
        REQUIRE(s.sentence < doc.sentences.size());
        const auto& sentence = doc.sentences[s.sentence];
        CHECK(s.first_token >= 1);
        CHECK(s.first_token <= s.last_token);
        CHECK(s.last_token <= static_cast<int>(sentence.tokens.size()));
        CHECK(oracle::span_satisfies(catalog()[*idx].rule, sentence, s.first_token, s.last_token));
        ++per_feature[*idx];
        ++spans;
      }
      for (std::size_t i = 0; i < catalog().size(); ++i) {
        if (catalog()[i].kind == FeatureKind::CountRate) CHECK(per_feature[i] == tagged.features.raw_counts[i]);
      }
    }
    CHECK(spans > 500);
  }

  TEST_CASE("parse, write, parse is stable") {
    for (const char* name : {"gold_sentences.conllu", "worked_examples.conllu", "passive_pair.conllu",
                             "three_docs.conllu"}) {
      const auto first = read_conllu_file(fixture::path(name));
      const auto text = write_conllu(first);
      const auto second = parse_conllu(text);
      CHECK(write_conllu(second) == text);
      REQUIRE(second.size() == first.size());
      for (std::size_t d = 0; d < first.size(); ++d) {
        CHECK(second[d].doc_id == first[d].doc_id);
        CHECK(second[d].source == first[d].source);
        CHECK(tag(second[d], catalog()).raw_counts == tag(first[d], catalog()).raw_counts);
      }
    }
    Rng rng(5);
    std::vector<AnnotatedDocument> docs;
    for (int i = 0; i < 50; ++i) {
      docs.push_back(synth::document(rng, "s" + std::to_string(i), 1 + rng.below(6), 1, 20));
    }
    const auto text = write_conllu(docs);
    CHECK(write_conllu(parse_conllu(text)) == text);
  }

  TEST_CASE("chunk spans are contiguous and bounded") {
    Rng rng(6);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t target = 5 + rng.below(60);
      const auto doc = synth::document(rng, "c" + std::to_string(trial), 1 + rng.below(40), 1, 25);
      std::size_t longest = 0;
      for (const auto& s : doc.sentences) longest = std::max(longest, s.word_count());
      ChunkPair pair;
      try {
        pair = split_chunks(doc, target);
      } catch (const TooShortError&) {
        // Rejection must be justified: no valid pair of spans exists.
        std::size_t acc = 0, i = 0;
        while (i < doc.sentences.size() && acc < target) acc += doc.sentences[i++].word_count();
        std::size_t acc2 = 0;
        while (i < doc.sentences.size() && acc2 < target) acc2 += doc.sentences[i++].word_count();
        CHECK((acc < target || acc2 < target));
        continue;
      }
      CHECK(pair.chunk1_first == 0);
      CHECK(pair.chunk1_last + 1 == pair.chunk2_first);
      CHECK(pair.chunk2_first <= pair.chunk2_last);
      CHECK(pair.chunk2_last < doc.sentences.size());
      const auto w1 = oracle::words(pair.chunk1), w2 = oracle::words(pair.chunk2);
      CHECK(w1 >= target);
      CHECK(w2 >= target);
      CHECK(w1 < target + longest);
      CHECK(w2 < target + longest);
      CHECK(w1 + w2 <= oracle::words(doc));
      CHECK(pair.chunk1.sentences.size() == pair.chunk1_last - pair.chunk1_first + 1);
      const auto again = split_chunks(doc, target);
      CHECK(again.chunk2_last == pair.chunk2_last);
    }
  }
}
