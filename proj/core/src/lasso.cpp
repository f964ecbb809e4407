#include "stylo/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stylo/error.hpp"
#include "stylo/split.hpp"

namespace stylo {

namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

class CoordinateSolver {
 public:
  CoordinateSolver(const LogisticProblem& prob, double lambda) : y_(prob.y), lambda_(lambda) {
    n_ = prob.x.size();
    p_ = n_ == 0 ? 0 : prob.x.front().size();
    cols_.assign(p_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < p_; ++j) cols_[j][i] = prob.x[i][j];
    }
    ones_.assign(n_, 1.0);
    eta_.assign(n_, 0.0);
  }

  void start(double intercept, const std::vector<double>& beta) {
    b0_ = intercept;
    beta_ = beta;
    std::fill(eta_.begin(), eta_.end(), intercept);
    for (std::size_t j = 0; j < p_; ++j) {
      if (beta_[j] == 0) continue;
      for (std::size_t i = 0; i < n_; ++i) eta_[i] += beta_[j] * cols_[j][i];
    }
  }

  /// One sweep over the intercept and all coefficients; returns the largest change.
  double sweep() {
    double change = update(ones_, b0_, 0.0);
    for (std::size_t j = 0; j < p_; ++j) change = std::max(change, update(cols_[j], beta_[j], lambda_));
    return change;
  }

  double intercept() const { return b0_; }
  const std::vector<double>& beta() const { return beta_; }

 private:
  // Smooth loss with coordinate moved by `delta` along `col`.
  double loss(const std::vector<double>& col, double delta) const {
    double s = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double z = eta_[i] + delta * col[i];
      s += softplus(z) - y_[i] * z;
    }
    return s / static_cast<double>(n_);
  }

  double update(const std::vector<double>& col, double& coef, double lam) {
    const double t0 = coef;
    double t = t0;
    double f = loss(col, 0.0) + lam * std::abs(t);
    for (int it = 0; it < 50; ++it) {
      double g = 0, h = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        const double pr = sigmoid(eta_[i] + (t - t0) * col[i]);
        g += col[i] * (pr - y_[i]);
        h += col[i] * col[i] * pr * (1 - pr);
      }
      g /= static_cast<double>(n_);
      h /= static_cast<double>(n_);
      if (!(h > 0)) break;
      const double u = soft_threshold(t - g / h, lam / h);
      if (u == t) break;
      double step = 1.0;
      bool moved = false;
      while (step > 1e-12) {
        const double cand = step == 1.0 ? u : t + step * (u - t);
        const double fc = loss(col, cand - t0) + lam * std::abs(cand);
        if (fc <= f) {
          moved = std::abs(cand - t) > 1e-15 * (1 + std::abs(t));
          t = cand;
          f = fc;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (t != t0) {
      const double d = t - t0;
      for (std::size_t i = 0; i < n_; ++i) eta_[i] += d * col[i];
      coef = t;
    }
    return std::abs(t - t0);
  }

  const std::vector<double>& y_;
  double lambda_;
  std::size_t n_ = 0, p_ = 0;
  std::vector<std::vector<double>> cols_;
  std::vector<double> ones_, eta_;
  double b0_ = 0;
  std::vector<double> beta_;
};

struct Standardized {
  std::vector<double> means, scales;
  LogisticProblem prob;
};

Standardized standardize(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                         const std::vector<std::size_t>& rows) {
  Standardized s;
  const std::size_t p = x.empty() ? 0 : x.front().size();
  const double n = static_cast<double>(rows.size());
  s.means.assign(p, 0.0);
  s.scales.assign(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    double m = 0;
    for (auto r : rows) m += x[r][j];
    m /= n;
    double v = 0;
    for (auto r : rows) v += (x[r][j] - m) * (x[r][j] - m);
    const double sd = std::sqrt(v / n);
    s.means[j] = m;
    s.scales[j] = sd > 0 ? sd : 1.0;
  }
  for (auto r : rows) {
    std::vector<double> z(p);
    for (std::size_t j = 0; j < p; ++j) z[j] = (x[r][j] - s.means[j]) / s.scales[j];
    s.prob.x.push_back(std::move(z));
    s.prob.y.push_back(y[r]);
  }
  return s;
}

double linear_predictor(const std::vector<double>& x, const std::vector<double>& means,
                        const std::vector<double>& scales, const std::vector<double>& beta, double intercept) {
  double eta = intercept;
  for (std::size_t j = 0; j < beta.size(); ++j) eta += beta[j] * (x[j] - means[j]) / scales[j];
  return eta;
}

void check_problem(const LogisticProblem& prob) {
  if (prob.x.empty()) throw ModelError("cannot fit on zero rows");
  if (prob.y.size() != prob.x.size()) throw ModelError("response length does not match rows");
  const auto p = prob.x.front().size();
  for (const auto& r : prob.x) {
    if (r.size() != p) throw ModelError("ragged design matrix");
  }
}

}  // namespace

double lasso_objective(const LogisticProblem& prob, double intercept, const std::vector<double>& beta, double lambda) {
  double s = 0;
  for (std::size_t i = 0; i < prob.x.size(); ++i) {
    double eta = intercept;
    for (std::size_t j = 0; j < beta.size(); ++j) eta += beta[j] * prob.x[i][j];
    s += softplus(eta) - prob.y[i] * eta;
  }
  double l1 = 0;
  for (double b : beta) l1 += std::abs(b);
  return s / static_cast<double>(prob.x.size()) + lambda * l1;
}

double null_intercept(const LogisticProblem& prob) {
  check_problem(prob);
  const double ybar = std::accumulate(prob.y.begin(), prob.y.end(), 0.0) / static_cast<double>(prob.y.size());
  if (ybar <= 0 || ybar >= 1) throw ModelError("response has a single class");
  return std::log(ybar / (1 - ybar));
}

double lambda_max(const LogisticProblem& prob) {
  const double p0 = sigmoid(null_intercept(prob));
  const std::size_t p = prob.x.front().size();
  double best = 0;
  for (std::size_t j = 0; j < p; ++j) {
    double g = 0;
    for (std::size_t i = 0; i < prob.x.size(); ++i) g += prob.x[i][j] * (p0 - prob.y[i]);
    best = std::max(best, std::abs(g / static_cast<double>(prob.x.size())));
  }
  return best;
}

LassoFit fit_lasso(const LogisticProblem& prob, double lambda, const SolverOptions& options, const LassoFit* warm) {
  check_problem(prob);
  if (!(lambda >= 0)) throw ModelError("lambda must be non-negative");
  const std::size_t p = prob.x.front().size();
  LassoFit fit;
  fit.beta.assign(p, 0.0);
  fit.intercept = null_intercept(prob);
  // At or above lambda_max the all-zero solution satisfies the optimality
  // conditions exactly; return it rather than an approximation.
  if (lambda >= lambda_max(prob)) {
    fit.objective = lasso_objective(prob, fit.intercept, fit.beta, lambda);
    return fit;
  }
  if (warm && warm->beta.size() == p) {
    fit.intercept = warm->intercept;
    fit.beta = warm->beta;
  }
  CoordinateSolver solver(prob, lambda);
  solver.start(fit.intercept, fit.beta);
  double change = 0;
  for (std::size_t s = 1; s <= options.max_sweeps; ++s) {
    change = solver.sweep();
    if (change <= options.tolerance) {
      fit.intercept = solver.intercept();
      fit.beta = solver.beta();
      fit.sweeps = s;
      fit.objective = lasso_objective(prob, fit.intercept, fit.beta, lambda);
      return fit;
    }
  }
  throw ConvergenceError(options.max_sweeps, change);
}

LassoModel LassoModel::train_fixed(const FeatureMatrix& data, double lambda, const SolverOptions& solver) {
  LassoModel m;
  m.labels_ = data.labels();
  if (m.labels_.size() != 2) throw ModelError("lasso needs exactly two classes");
  m.feature_ids_ = data.feature_ids();
  const auto x = design_matrix(data, m.feature_ids_);
  std::vector<double> y(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) y[i] = data[i].source == m.labels_[1] ? 1.0 : 0.0;
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto st = standardize(x, y, all);
  const auto fit = fit_lasso(st.prob, lambda, solver);
  m.means_ = std::move(st.means);
  m.scales_ = std::move(st.scales);
  m.beta_ = fit.beta;
  m.intercept_ = fit.intercept;
  m.lambda_ = lambda;
  return m;
}

LassoModel LassoModel::train(const FeatureMatrix& data, const LassoParams& params) {
  LassoModel m;
  m.labels_ = data.labels();
  if (m.labels_.size() != 2) throw ModelError("lasso needs exactly two classes");
  m.feature_ids_ = data.feature_ids();
  const auto x = design_matrix(data, m.feature_ids_);
  std::vector<double> y(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) y[i] = data[i].source == m.labels_[1] ? 1.0 : 0.0;
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto full = standardize(x, y, all);

  std::vector<double> grid = params.lambdas;
  if (grid.empty()) {
    const double top = lambda_max(full.prob);
    for (int k = 0; k < 20; ++k) grid.push_back(top * std::pow(10.0, -3.0 * k / 19.0));
  }
  std::sort(grid.begin(), grid.end(), std::greater<>());

  const auto fold_of = assign_folds(data, params.folds, params.seed);
  std::vector<std::vector<double>> acc(grid.size(), std::vector<double>(params.folds, 0.0));
  for (std::size_t f = 0; f < params.folds; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < data.size(); ++i) (fold_of[i] == f ? test_rows : train_rows).push_back(i);
    if (test_rows.empty()) throw ModelError("a cross-validation fold is empty");
    auto st = standardize(x, y, train_rows);
    LassoFit prev;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      prev = fit_lasso(st.prob, grid[k], params.solver, k == 0 ? nullptr : &prev);
      std::size_t correct = 0;
      for (auto r : test_rows) {
        const double eta = linear_predictor(x[r], st.means, st.scales, prev.beta, prev.intercept);
        correct += ((eta > 0) ? 1.0 : 0.0) == y[r];
      }
      acc[k][f] = static_cast<double>(correct) / static_cast<double>(test_rows.size());
    }
  }

  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double mean = std::accumulate(acc[k].begin(), acc[k].end(), 0.0) / static_cast<double>(params.folds);
    double var = 0;
    for (double a : acc[k]) var += (a - mean) * (a - mean);
    const double se = std::sqrt(var / static_cast<double>(params.folds - 1)) / std::sqrt(static_cast<double>(params.folds));
    m.path_.push_back({grid[k], mean, se, 0});
    if (mean > m.path_[best].mean_accuracy) best = k;
  }
  const double floor = m.path_[best].mean_accuracy - m.path_[best].standard_error;
  std::size_t chosen = best;
  for (std::size_t k = 0; k <= best; ++k) {
    if (m.path_[k].mean_accuracy >= floor) {
      chosen = k;
      break;
    }
  }

  LassoFit prev, picked;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    prev = fit_lasso(full.prob, grid[k], params.solver, k == 0 ? nullptr : &prev);
    m.path_[k].nonzero = static_cast<std::size_t>(std::count_if(prev.beta.begin(), prev.beta.end(),
                                                                 [](double b) { return b != 0; }));
    if (k == chosen) picked = prev;
  }
  m.means_ = std::move(full.means);
  m.scales_ = std::move(full.scales);
  m.beta_ = picked.beta;
  m.intercept_ = picked.intercept;
  m.lambda_ = grid[chosen];
  return m;
}

Prediction LassoModel::predict(const FeatureMatrix& rows) const {
  const auto x = design_matrix(rows, feature_ids_);
  Prediction out;
  for (const auto& r : x) {
    const double pr = sigmoid(linear_predictor(r, means_, scales_, beta_, intercept_));
    out.labels.push_back(pr > 0.5 ? labels_[1] : labels_[0]);
    out.scores.push_back({1 - pr, pr});
  }
  return out;
}

ImportanceRanking LassoModel::selected() const {
  ImportanceRanking r;
  for (std::size_t j = 0; j < beta_.size(); ++j) {
    if (beta_[j] != 0) r.emplace_back(feature_ids_[j], beta_[j]);
  }
  std::stable_sort(r.begin(), r.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
  return r;
}

nlohmann::json LassoModel::to_json() const {
  nlohmann::json path = nlohmann::json::array();
  for (const auto& p : path_) {
    path.push_back({{"lambda", p.lambda},
                    {"mean_accuracy", p.mean_accuracy},
                    {"standard_error", p.standard_error},
                    {"nonzero", p.nonzero}});
  }
  return {{"labels", labels_},       {"feature_ids", feature_ids_}, {"means", means_},
          {"scales", scales_},       {"coefficients", beta_},       {"intercept", intercept_},
          {"lambda", lambda_},       {"cv_path", std::move(path)}};
}

LassoModel LassoModel::from_json(const nlohmann::json& j) {
  LassoModel m;
  try {
    m.labels_ = j.at("labels").get<std::vector<std::string>>();
    m.feature_ids_ = j.at("feature_ids").get<std::vector<std::string>>();
    m.means_ = j.at("means").get<std::vector<double>>();
    m.scales_ = j.at("scales").get<std::vector<double>>();
    m.beta_ = j.at("coefficients").get<std::vector<double>>();
    m.intercept_ = j.at("intercept").get<double>();
    m.lambda_ = j.at("lambda").get<double>();
    for (const auto& p : j.value("cv_path", nlohmann::json::array())) {
      m.path_.push_back({p.at("lambda").get<double>(), p.at("mean_accuracy").get<double>(),
                         p.at("standard_error").get<double>(), p.at("nonzero").get<std::size_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed lasso model: ") + e.what());
  }
  const auto p = m.feature_ids_.size();
  if (m.labels_.size() != 2 || m.means_.size() != p || m.scales_.size() != p || m.beta_.size() != p) {
    throw ModelError("malformed lasso model: inconsistent sizes");
  }
  return m;
}

}  // namespace stylo
