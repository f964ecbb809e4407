#include <doctest.h>

#include "oracles.hpp"
#include "stylo/conllu.hpp"
#include "stylo/error.hpp"
#include "stylo/filter.hpp"
#include "stylo/hash.hpp"
#include "stylo/prompt.hpp"

using namespace stylo;

namespace {

std::string words(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " w" : "w") + std::to_string(i);
  return s;
}

}  // namespace

TEST_SUITE("prompt_filter") {
  TEST_CASE("sha256 test vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("template slots are filled once") {
    PromptTemplate t;
    t.user_text = "Text: {chunk1} ({word_target} words)";
    t.word_target = 250;
    const auto p = build_prompt("A {word_target} B", t);
    CHECK(p.user == "Text: A {word_target} B (250 words)");
    CHECK(p.system == t.system_text);
    CHECK(p.hash() == sha256_hex(p.system + "\x1f" + p.user));
    CHECK(p.hash() != build_prompt("A B", t).hash());

    CHECK_THROWS_AS(build_prompt("  \n", t), Error);
    t.user_text = "{chunk1} {chunk1} {word_target}";
    CHECK_THROWS_AS(t.validate(), Error);
    t.user_text = "{chunk1}";
    CHECK_THROWS_AS(t.validate(), Error);
  }

  TEST_CASE("template json") {
    const auto t = PromptTemplate::from_json({{"word_target", 300}});
    CHECK(t.word_target == 300);
    CHECK(t.user_text == PromptTemplate{}.user_text);
    CHECK(PromptTemplate::from_json(t.to_json()).to_json() == t.to_json());
    CHECK_THROWS_AS(PromptTemplate::from_json({{"user", "no slots"}}), Error);
    CHECK_THROWS_AS(PromptTemplate::from_json({{"word_target", 0}}), Error);
  }

  TEST_CASE("surface text") {
    const auto docs = parse_conllu(fixture::read(fixture::path("three_docs.conllu")));
    const auto text = surface_text(docs[0]);
    CHECK(!text.empty());
    AnnotatedDocument d;
    Sentence s;
    s.tokens.push_back({});
    s.tokens.back().form = "Hi";
    s.tokens.back().misc = "SpaceAfter=No";
    s.tokens.push_back({});
    s.tokens.back().form = "!";
    s.tokens.push_back({});
    s.tokens.back().form = "Bye";
    d.sentences.push_back(s);
    Sentence t;
    t.text = "Second one.";
    d.sentences.push_back(t);
    CHECK(surface_text(d) == "Hi! Bye Second one.");
  }

  TEST_CASE("word counting") {
    CHECK(count_words("") == 0);
    CHECK(count_words("  one\ttwo\n\nthree  ") == 3);
    CHECK(count_words(words(120)) == 120);
  }

  TEST_CASE("preambles are removed") {
    const auto body = words(5);
    CHECK(strip_preamble("Here is the continuation of the text:\n\n" + body) == body);
    CHECK(strip_preamble("Sure! Here's a continuation:  " + body) == body);
    CHECK(strip_preamble("Here\xE2\x80\x99s the continuation:\n" + body) == body);
    CHECK(strip_preamble("Continuation: Here is the continuation of the text: " + body) == body);
    CHECK(strip_preamble("  " + body + "  ") == body);
    // Ordinary openings are kept.
    CHECK(strip_preamble("Here is where the story ends: nowhere.") == "Here is where the story ends: nowhere.");
  }

  TEST_CASE("filter outcomes") {
    FilterPolicy policy;
    auto ok = filter_output("Here is the continuation:\n" + words(150), policy);
    CHECK(ok.accepted);
    CHECK(ok.reason == RejectReason::None);
    CHECK(ok.word_count == 150);
    CHECK(ok.text == words(150));

    auto refusal = filter_output("I\xE2\x80\x99m SORRY, BUT I cannot do that. " + words(150), policy);
    CHECK_FALSE(refusal.accepted);
    CHECK(refusal.reason == RejectReason::Refusal);

    // Phrases after the first 200 code points do not count.
    std::string late(250, 'x');
    late += " I cannot " + words(150);
    CHECK(filter_output(late, policy).accepted);
    std::string multibyte;
    for (int i = 0; i < 199; ++i) multibyte += "\xC3\xA9";
    CHECK(filter_output(multibyte + " as an AI " + words(150), policy).accepted);
    CHECK(filter_output(multibyte.substr(0, 2 * 150) + " as an AI " + words(150), policy).reason ==
          RejectReason::Refusal);

    auto short_text = filter_output(words(99), policy);
    CHECK(short_text.reason == RejectReason::TooShort);
    CHECK(short_text.word_count == 99);
    CHECK(filter_output(words(100), policy).accepted);

    policy.min_words = 0;
    CHECK_THROWS_AS(filter_output("x", policy), Error);
    CHECK(to_string(RejectReason::TooShort) == "too_short");
    CHECK(to_string(RejectReason::ApiError) == "api_error");
  }
}
