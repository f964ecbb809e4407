#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stylo/error.hpp"
#include "stylo/lasso.hpp"

using namespace stylo;

TEST_SUITE("lasso") {
  TEST_CASE("lambda_max zeroes every coefficient") {
    const auto prob = synth::logistic_problem(200, 10, 3);
    const double top = lambda_max(prob);
    CHECK(top > 0);
    for (double scale : {1.0, 1.5, 10.0}) {
      const auto fit = fit_lasso(prob, top * scale);
      for (double b : fit.beta) CHECK(b == 0.0);
      double ybar = 0;
      for (double y : prob.y) ybar += y;
      ybar /= static_cast<double>(prob.y.size());
      CHECK(fit.intercept == doctest::Approx(std::log(ybar / (1 - ybar))));
    }
    // Just below the threshold one coefficient moves.
    const auto fit = fit_lasso(prob, top * 0.9);
    std::size_t nonzero = 0;
    for (double b : fit.beta) nonzero += b != 0;
    CHECK(nonzero >= 1);
  }

  TEST_CASE("objective agrees with a proximal gradient reference") {
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto prob = synth::logistic_problem(150, 8, seed);
      const double top = lambda_max(prob);
      for (double frac : {0.5, 0.1, 0.01}) {
        const auto mine = fit_lasso(prob, top * frac, {50000, 1e-12});
        const auto ref = oracle::fista_lasso(prob, top * frac);
        CHECK(std::fabs(mine.objective - ref.objective) < 1e-6);
        CHECK(mine.objective == doctest::Approx(lasso_objective(prob, mine.intercept, mine.beta, top * frac)));
      }
    }
  }

  TEST_CASE("objective improves on the start and on warm starts") {
    const auto prob = synth::logistic_problem(120, 6, 9);
    const double lambda = lambda_max(prob) * 0.05;
    const auto cold = fit_lasso(prob, lambda);
    const std::vector<double> zeros(6, 0.0);
    CHECK(cold.objective <= lasso_objective(prob, null_intercept(prob), zeros, lambda));
    const auto wider = fit_lasso(prob, lambda * 4);
    const auto warm = fit_lasso(prob, lambda, {}, &wider);
    CHECK(std::fabs(warm.objective - cold.objective) < 1e-8);
    // Smaller penalty, lower optimum.
    CHECK(cold.objective <= wider.objective);
  }

  TEST_CASE("fit errors") {
    auto prob = synth::logistic_problem(20, 3, 1);
    CHECK_THROWS_AS(fit_lasso(prob, -1.0), ModelError);
    for (auto& y : prob.y) y = 1;
    CHECK_THROWS_AS(fit_lasso(prob, 0.1), ModelError);
    CHECK_THROWS_AS(fit_lasso(LogisticProblem{}, 0.1), ModelError);
    const auto hard = synth::logistic_problem(100, 8, 4);
    CHECK_THROWS_AS(fit_lasso(hard, lambda_max(hard) * 0.001, {1, 1e-15}), ConvergenceError);
  }

  TEST_CASE("cross-validated model") {
    const auto m = synth::separated_matrix(200, 4, 2.0, 11);
    LassoParams p;
    p.lambdas = {0.2, 0.05, 0.01};
    const auto model = LassoModel::train(m, p);
    REQUIRE(model.cv_path().size() == 3);
    CHECK(model.cv_path()[0].lambda == 0.2);
    for (std::size_t k = 1; k < 3; ++k) CHECK(model.cv_path()[k].nonzero >= model.cv_path()[k - 1].nonzero);
    const auto sel = model.selected();
    REQUIRE(!sel.empty());
    CHECK(sel[0].first == "f_05");
    CHECK(sel[0].second > 0);  // informative feature is shifted towards "llm"
    CHECK(model.class_labels() == std::vector<std::string>{"human_chunk2", "llm"});
    std::size_t right = 0;
    const auto pred = model.predict(m);
    for (std::size_t i = 0; i < m.size(); ++i) right += pred.labels[i] == m[i].source;
    CHECK(right > 155);  // Bayes rate is Phi(1) = 0.84 at this separation

    const auto back = LassoModel::from_json(model.to_json());
    CHECK(back.to_json() == model.to_json());
    CHECK(back.predict(m).labels == pred.labels);
  }

  TEST_CASE("two classes are required") {
    auto m = synth::separated_matrix(30, 1, 1.0, 2);
    FeatureMatrix three(m.feature_ids());
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto r = m[i];
      if (i % 3 == 0) r.source = "other";
      three.add_row(r);
    }
    CHECK_THROWS_AS(LassoModel::train(three), ModelError);
    CHECK_THROWS_AS(LassoModel::train_fixed(three, 0.1), ModelError);
    auto j = LassoModel::train_fixed(m, 0.1).to_json();
    j["means"].erase(0);
    CHECK_THROWS_AS(LassoModel::from_json(j), ModelError);
  }
}
