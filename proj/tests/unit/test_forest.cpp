#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stylo/error.hpp"
#include "stylo/forest.hpp"

using namespace stylo;

namespace {

FeatureMatrix small_data(std::uint64_t seed, std::size_t n = 120) {
  Rng rng(seed);
  FeatureMatrix m({"f_01", "f_02", "f_03", "f_04"});
  for (std::size_t i = 0; i < n; ++i) {
    const char* label = i % 3 == 0 ? "a" : (i % 3 == 1 ? "b" : "c");
    std::vector<double> x = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    x[1] += 2.0 * static_cast<double>(i % 3);
    m.add_row({"r" + std::to_string(i), label, 10, x});
  }
  return m;
}

}  // namespace

TEST_SUITE("forest") {
  TEST_CASE("without bootstrap a full tree memorizes the training set") {
    const auto m = small_data(1);
    ForestParams p;
    p.n_trees = 1;
    p.bootstrap = false;
    p.max_features = 4;
    const auto model = ForestModel::train(m, p);
    const auto pred = model.predict(m);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(pred.labels[i] == m[i].source);
  }

  TEST_CASE("serialized trees agree with an independent walker") {
    const auto m = small_data(2);
    ForestParams p;
    p.n_trees = 25;
    const auto model = ForestModel::train(m, p);
    const auto j = model.to_json();
    Rng rng(7);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> x = {rng.normal() * 2, rng.normal() * 3 + 2, rng.normal(), rng.normal()};
      CHECK(model.predict_one(x) == oracle::forest_vote(j, x));
    }
  }

  TEST_CASE("thread count does not change the model") {
    const auto m = small_data(3);
    ForestParams p;
    p.n_trees = 40;
    p.threads = 1;
    const auto one = ForestModel::train(m, p).to_json().dump();
    p.threads = 3;
    CHECK(ForestModel::train(m, p).to_json().dump() == one);
    p.seed = 2;
    CHECK(ForestModel::train(m, p).to_json().dump() != one);
  }

  TEST_CASE("json round trip") {
    const auto m = small_data(4);
    ForestParams p;
    p.n_trees = 10;
    p.max_depth = 3;
    p.min_samples_leaf = 2;
    const auto model = ForestModel::train(m, p);
    for (const auto& t : model.trees()) CHECK(t.depth() <= 3);
    const auto back = ForestModel::from_json(model.to_json());
    CHECK(back.to_json() == model.to_json());
    CHECK(back.predict(m).labels == model.predict(m).labels);
    CHECK(back.params().max_depth == 3);

    auto broken = model.to_json();
    broken["trees"][0] = {{"feature", 9}, {"threshold", 0.0}, {"decrease", 1.0},
                          {"left", {{"counts", {1, 0, 0}}}}, {"right", {{"counts", {0, 1, 0}}}}};
    CHECK_THROWS_AS(ForestModel::from_json(broken), ModelError);
    broken["trees"][0] = {{"counts", {1, 0}}};
    CHECK_THROWS_AS(ForestModel::from_json(broken), ModelError);
  }

  TEST_CASE("ties go to the lowest class index") {
    DecisionTree t;
    t.nodes.push_back({-1, 0, -1, -1, 0, {2, 2, 1}});
    CHECK(t.predict({0.0}) == 0);
    t.nodes[0].class_counts = {0, 3, 3};
    CHECK(t.predict({0.0}) == 1);
    CHECK(t.depth() == 0);
  }

  TEST_CASE("importance") {
    const auto m = small_data(5, 300);
    ForestParams p;
    p.n_trees = 50;
    bool degenerate = true;
    const auto imp = ForestModel::train(m, p).gini_importance(&degenerate);
    CHECK_FALSE(degenerate);
    REQUIRE(imp.size() == 4);
    CHECK(imp[0].first == "f_02");
    double sum = 0;
    for (std::size_t i = 0; i < imp.size(); ++i) {
      CHECK(imp[i].second >= 0);
      if (i > 0) CHECK(imp[i - 1].second >= imp[i].second);
      sum += imp[i].second;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("constant features never split") {
    FeatureMatrix m({"f_01", "f_02"});
    for (int i = 0; i < 10; ++i) m.add_row({"r" + std::to_string(i), i % 2 ? "x" : "y", 1, {1.0, 2.0}});
    ForestParams p;
    p.n_trees = 5;
    bool degenerate = false;
    const auto imp = ForestModel::train(m, p).gini_importance(&degenerate);
    CHECK(degenerate);
    CHECK(imp[0].second == 0.5);
    CHECK(imp[1].second == 0.5);
  }

  TEST_CASE("training errors") {
    FeatureMatrix one({"f_01"});
    one.add_row({"a", "x", 1, {1}});
    one.add_row({"b", "x", 1, {2}});
    CHECK_THROWS_AS(ForestModel::train(one), ModelError);
    CHECK_THROWS_AS(ForestModel::train(FeatureMatrix({"f_01"})), ModelError);
    ForestParams p;
    p.n_trees = 0;
    CHECK_THROWS_AS(ForestModel::train(small_data(1), p), ModelError);
    auto missing = small_data(1, 6);
    missing.add_row({"nan", "a", 1, {NAN, 0, 0, 0}});
    CHECK_THROWS_AS(ForestModel::train(missing), ModelError);
  }
}
