#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stylo/classifier.hpp"
#include "stylo/compare.hpp"

namespace stylo {

struct ForestParams {
  std::size_t n_trees = 500;
  std::size_t max_features = 8;  ///< features tried per split; 0 = floor(sqrt(p))
  std::size_t min_samples_leaf = 1;
  std::size_t max_depth = 0;  ///< 0 = unlimited
  bool bootstrap = true;
  std::uint64_t seed = 1;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct TreeNode {
  int feature = -1;  ///< -1 marks a leaf
  double threshold = 0;  ///< rows with value <= threshold go left
  int left = -1;
  int right = -1;
  double impurity_decrease = 0;  ///< weighted by node sample count
  std::vector<double> class_counts;  ///< leaves only
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  ///< node 0 is the root

  /// Majority class of the leaf reached by `x`; ties go to the lowest index.
  std::size_t predict(const std::vector<double>& x) const;
  std::size_t depth() const;
};

/// Random forest of CART trees grown on Gini impurity. Each tree draws its
/// own seed from the master seed, so results do not depend on thread count.
class ForestModel final : public Classifier {
 public:
  static ForestModel train(const FeatureMatrix& data, const ForestParams& params = {});

  std::string kind() const override { return "random_forest"; }
  const std::vector<std::string>& class_labels() const override { return labels_; }
  const std::vector<std::string>& feature_ids() const override { return feature_ids_; }
  Prediction predict(const FeatureMatrix& rows) const override;
  /// Label index and per-class vote fractions for one feature vector.
  std::size_t predict_one(const std::vector<double>& x, std::vector<double>* votes = nullptr) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  const ForestParams& params() const noexcept { return params_; }

  /// Mean decrease in impurity, normalized to sum to 1, most important first.
  /// When no tree ever split, every feature gets 1/p and `degenerate` is set.
  ImportanceRanking gini_importance(bool* degenerate = nullptr) const;

  nlohmann::json to_json() const override;
  static ForestModel from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> feature_ids_;
  std::vector<DecisionTree> trees_;
  ForestParams params_;
};

}  // namespace stylo
