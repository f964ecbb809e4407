#include <doctest.h>

#include "oracles.hpp"
#include "stylo/chunking.hpp"
#include "stylo/error.hpp"

using namespace stylo;

namespace {

AnnotatedDocument doc_with_lengths(const std::vector<std::size_t>& lengths) {
  Rng rng(5);
  AnnotatedDocument d;
  d.doc_id = "story";
  d.source.name = "human_chunk1";
  d.source.genre = "fiction";
  for (auto n : lengths) d.sentences.push_back(synth::sentence(rng, n));
  return d;
}

}  // namespace

TEST_SUITE("chunking") {
  TEST_CASE("first boundary at or after the target") {
    const auto pair = split_chunks(doc_with_lengths({3, 3, 3, 3, 3, 3}), 5);
    CHECK(pair.doc_id == "story");
    CHECK(pair.chunk1_first == 0);
    CHECK(pair.chunk1_last == 1);
    CHECK(pair.chunk2_first == 2);
    CHECK(pair.chunk2_last == 3);
    CHECK(pair.chunk1.doc_id == "story#chunk1");
    CHECK(pair.chunk2.doc_id == "story#chunk2");
    CHECK(pair.chunk1.source.name == "human_chunk1");
    CHECK(pair.chunk2.source.name == "human_chunk2");
    CHECK(pair.chunk2.source.genre == "fiction");
    CHECK(pair.chunk1.word_count() == 6);
    CHECK(pair.chunk2.word_count() == 6);
  }

  TEST_CASE("a sentence that lands exactly on the target closes the chunk") {
    const auto pair = split_chunks(doc_with_lengths({5, 5, 2}), 5);
    CHECK(pair.chunk1_last == 0);
    CHECK(pair.chunk2_first == 1);
    CHECK(pair.chunk2_last == 1);
  }

  TEST_CASE("too short documents") {
    try {
      split_chunks(doc_with_lengths({4, 4}), 5);
      FAIL("expected TooShortError");
    } catch (const TooShortError& e) {
      CHECK(e.word_count() == 8);
      CHECK(e.required() == 10);
    }
    // Enough words overall, but chunk 1 swallows most of them.
    CHECK_THROWS_AS(split_chunks(doc_with_lengths({9, 1, 1}), 5), TooShortError);
    CHECK_THROWS_AS(split_chunks(doc_with_lengths({9, 1, 1}), 0), std::invalid_argument);
  }

  TEST_CASE("chunks carry the parent's sentences unchanged") {
    const auto doc = doc_with_lengths({7, 2, 6, 4, 8, 3});
    const auto a = split_chunks(doc, 8);
    const auto b = split_chunks(doc, 8);
    CHECK(a.chunk1_last == b.chunk1_last);
    CHECK(a.chunk2_last == b.chunk2_last);
    for (std::size_t i = a.chunk2_first; i <= a.chunk2_last; ++i) {
      CHECK(a.chunk2.sentences[i - a.chunk2_first].tokens.size() == doc.sentences[i].tokens.size());
    }
  }
}
