#include <doctest.h>

#include <cstdio>

#include "oracles.hpp"
#include "stylo/error.hpp"
#include "stylo/evaluate.hpp"
#include "stylo/forest.hpp"
#include "stylo/lasso.hpp"

using namespace stylo;

TEST_SUITE("evaluate") {
  TEST_CASE("confusion counts and rates") {
    const std::vector<std::string> truth = {"human_chunk2", "human_chunk2", "human_chunk2", "gpt", "gpt", "llama"};
    const std::vector<std::string> pred = {"human_chunk2", "gpt", "human_chunk2", "gpt", "human_chunk2", "llama"};
    const auto cm = confusion(truth, pred);
    CHECK(cm.labels == std::vector<std::string>{"gpt", "human_chunk2", "llama"});
    CHECK(cm.total() == 6);
    CHECK(cm.correct() == 4);
    CHECK(cm.accuracy() == doctest::Approx(4.0 / 6));
    CHECK(cm.counts[cm.index_of("gpt")][cm.index_of("human_chunk2")] == 1);
    CHECK(*cm.llm_to_human() == doctest::Approx(1.0 / 3));
    CHECK(*cm.human_to_llm() == doctest::Approx(1.0 / 3));
    CHECK(cm.to_csv() == "true\\predicted,gpt,human_chunk2,llama\ngpt,1,1,0\nhuman_chunk2,1,2,0\nllama,0,0,1\n");
    const auto j = cm.to_json();
    CHECK(j["total"] == 6);
    CHECK(j["llm_to_human"].get<double>() == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(cm.index_of("none"), ModelError);
    CHECK_THROWS_AS(confusion({"a"}, {}), ModelError);
  }

  TEST_CASE("rates are undefined without the relevant rows") {
    const auto cm = confusion({"llm", "llm"}, {"human_chunk2", "llm"});
    CHECK(*cm.llm_to_human() == 0.5);
    CHECK_FALSE(cm.human_to_llm().has_value());
    CHECK(cm.to_json()["human_to_llm"].is_null());
  }

  TEST_CASE("model envelope") {
    const auto m = synth::separated_matrix(60, 2, 3.0, 5);
    ForestParams p;
    p.n_trees = 5;
    const auto forest = ForestModel::train(m, p);
    const auto lasso = LassoModel::train_fixed(m, 0.05);

    for (const Classifier* c : std::vector<const Classifier*>{&forest, &lasso}) {
      const auto j = model_to_json(*c);
      CHECK(j["format"] == "stylo-model");
      CHECK(j["version"] == kModelFormatVersion);
      const auto back = model_from_json(j);
      CHECK(back->kind() == c->kind());
      CHECK(back->predict(m).labels == c->predict(m).labels);
    }

    auto j = model_to_json(forest);
    j["version"] = 99;
    CHECK_THROWS_AS(model_from_json(j), ModelError);
    j = model_to_json(forest);
    j["type"] = "svm";
    CHECK_THROWS_AS(model_from_json(j), ModelError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::array()), ModelError);

    const std::string path = "evaluate_test_model.json";
    save_model(lasso, path);
    CHECK(load_model(path)->to_json() == lasso.to_json());
    {
      std::FILE* f = std::fopen(path.c_str(), "w");
      std::fputs("{not json", f);
      std::fclose(f);
    }
    CHECK_THROWS_AS(load_model(path), ModelError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_model("missing/model.json"), Error);
  }

  TEST_CASE("evaluation and cross-corpus checks") {
    const auto train = synth::separated_matrix(100, 0, 4.0, 1);
    const auto test = synth::separated_matrix(40, 0, 4.0, 2);
    ForestParams p;
    p.n_trees = 30;
    const auto forest = ForestModel::train(train, p);
    const auto e = evaluate(forest, test);
    CHECK(e.confusion.total() == 40);
    CHECK(e.doc_ids.size() == 40);
    CHECK(e.confusion.accuracy() > 0.9);

    const auto report = cross_corpus_eval(forest, test, "a", "b");
    const auto j = report.to_json();
    CHECK(j["train_corpus"] == "a");
    CHECK(j["predictions"].size() == 40);

    FeatureMatrix narrow({"f_01"});
    narrow.add_row({"x", "llm", 1, {0.0}});
    CHECK_THROWS_AS(cross_corpus_eval(forest, narrow, "a", "b"), ModelError);
    CHECK_THROWS_AS(evaluate(forest, FeatureMatrix(train.feature_ids())), ModelError);
    CHECK_THROWS_AS(evaluate(forest, narrow), ModelError);
  }
}
