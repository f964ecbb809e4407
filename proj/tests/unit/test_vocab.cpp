#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "stylo/vocab.hpp"

using namespace stylo;

namespace {

AnnotatedDocument doc_of(const std::string& id, const std::vector<std::string>& lemmas) {
  AnnotatedDocument d;
  d.doc_id = id;
  Sentence s;
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    Token t;
    t.index = static_cast<int>(i + 1);
    t.form = t.lemma = lemmas[i];
    t.upos = lemmas[i] == "." ? "PUNCT" : "NOUN";
    t.head = i == 0 ? 0 : 1;
    s.tokens.push_back(t);
  }
  d.sentences.push_back(s);
  return d;
}

}  // namespace

TEST_SUITE("vocab") {
  TEST_CASE("rates over the concatenated corpus") {
    const auto t = word_rates({doc_of("a", {"x", "y", "x", "."}), doc_of("b", {"y", "z"})});
    CHECK(t.total_words == 5);
    CHECK(t.documents == 2);
    CHECK(t.lemmas.at("x").count == 2);
    CHECK(t.lemmas.at("x").rate == doctest::Approx(400.0));
    CHECK(t.lemmas.at("y").documents == 2);
    CHECK(t.lemmas.at("y").doc_fraction == 1.0);
    CHECK(t.lemmas.at("z").doc_fraction == 0.5);
    CHECK_FALSE(t.lemmas.contains("."));
    CHECK_THROWS_AS(word_rates({}), std::invalid_argument);
  }

  TEST_CASE("brute-force lemma counts") {
    const auto docs = read_conllu_file(fixture::path("gold_sentences.conllu"));
    const auto t = word_rates(docs);
    std::map<std::string, std::size_t> counts;
    std::size_t words = 0;
    for (const auto& d : docs) {
      for (const auto& s : d.sentences) {
        for (const auto& tok : s.tokens) {
          if (tok.upos == "PUNCT") continue;
          ++counts[tok.lemma];
          ++words;
        }
      }
    }
    CHECK(t.total_words == words);
    REQUIRE(t.lemmas.size() == counts.size());
    for (const auto& [lemma, n] : counts) CHECK(t.lemmas.at(lemma).count == n);
  }

  TEST_CASE("comparison rows") {
    const auto human = word_rates({doc_of("a", {"x", "y", "y", "w"})});
    const auto llm = word_rates({doc_of("b", {"x", "x", "x", "y"}), doc_of("c", {"q", "q", "q", "q"})});
    const auto rows = compare_vocab(human, llm);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].lemma == "x");
    CHECK(rows[0].ratio == doctest::Approx(375.0 / 250.0));
    CHECK(rows[0].llm_doc_fraction == 0.5);
    CHECK(rows[1].lemma == "y");
    CHECK(rows[2].lemma == "w");
    CHECK(rows[2].ratio == 0.0);
    CHECK(top_overrepresented(rows, 1)[0].lemma == "x");
    CHECK(top_underrepresented(rows, 2)[0].lemma == "w");
    CHECK(top_underrepresented(rows, 10).size() == 3);
    // Threshold is exclusive.
    CHECK(compare_vocab(human, llm, 250.0).size() == 1);
    CHECK(vocab_csv(rows).rfind("lemma,human_rate,llm_rate,ratio,llm_doc_fraction\n", 0) == 0);
  }
}
