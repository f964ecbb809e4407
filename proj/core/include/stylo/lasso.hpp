#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stylo/classifier.hpp"
#include "stylo/compare.hpp"

namespace stylo {

/// Dense row-major design matrix with 0/1 responses.
struct LogisticProblem {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
};

struct LassoFit {
  double intercept = 0;
  std::vector<double> beta;
  double objective = 0;
  std::size_t sweeps = 0;
};

struct SolverOptions {
  std::size_t max_sweeps = 10000;
  double tolerance = 1e-10;  ///< on the largest coefficient change per sweep
};

/// (1/n) sum [log(1 + exp(eta_i)) - y_i eta_i] + lambda * ||beta||_1, with an
/// unpenalized intercept.
double lasso_objective(const LogisticProblem& prob, double intercept, const std::vector<double>& beta, double lambda);

/// Intercept-only fit, logit of the mean response.
double null_intercept(const LogisticProblem& prob);

/// Largest |(1/n) sum x_ij (p0 - y_i)| at the intercept-only fit: the smallest
/// penalty for which every coefficient is zero.
double lambda_max(const LogisticProblem& prob);

/// Cyclic coordinate descent; each coordinate step is a proximal Newton update
/// safeguarded by backtracking, so the objective never increases. `warm`
/// optionally supplies the starting point. Throws ConvergenceError when the
/// sweep budget runs out.
LassoFit fit_lasso(const LogisticProblem& prob, double lambda, const SolverOptions& options = {},
                   const LassoFit* warm = nullptr);

struct LassoParams {
  std::vector<double> lambdas;  ///< empty = 20 log-spaced values from lambda_max to 1e-3 lambda_max
  std::size_t folds = 5;
  std::uint64_t seed = 1;
  SolverOptions solver;
};

struct CvPoint {
  double lambda;
  double mean_accuracy;
  double standard_error;
  std::size_t nonzero;  ///< coefficients on the full training set
};

/// Binary logistic lasso on standardized features. The positive class is the
/// lexicographically larger label, so a positive coefficient points to it.
class LassoModel final : public Classifier {
 public:
  /// Chooses lambda by grouped, stratified k-fold cross-validation with the
  /// one-standard-error rule, then refits on all of `data`.
  static LassoModel train(const FeatureMatrix& data, const LassoParams& params = {});
  /// Fits a single lambda without cross-validation.
  static LassoModel train_fixed(const FeatureMatrix& data, double lambda, const SolverOptions& solver = {});

  std::string kind() const override { return "lasso_logistic"; }
  const std::vector<std::string>& class_labels() const override { return labels_; }
  const std::vector<std::string>& feature_ids() const override { return feature_ids_; }
  Prediction predict(const FeatureMatrix& rows) const override;

  double lambda() const noexcept { return lambda_; }
  double intercept() const noexcept { return intercept_; }
  /// Coefficients on the standardized scale, aligned with feature_ids().
  const std::vector<double>& coefficients() const noexcept { return beta_; }
  const std::vector<CvPoint>& cv_path() const noexcept { return path_; }
  /// Features with nonzero coefficients ordered by |coefficient|.
  ImportanceRanking selected() const;

  nlohmann::json to_json() const override;
  static LassoModel from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> feature_ids_;
  std::vector<double> means_;
  std::vector<double> scales_;
  std::vector<double> beta_;
  double intercept_ = 0;
  double lambda_ = 0;
  std::vector<CvPoint> path_;
};

}  // namespace stylo
