#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylo/feature_matrix.hpp"

namespace stylo {

/// Paired human/LLM statistics for one feature.
struct ComparisonResult {
  std::string feature_id;
  double human_mean = 0;
  double llm_mean = 0;
  std::optional<double> ratio;  ///< llm_mean / human_mean; empty unless both means > 0
  double p_raw = 1;
  double p_adjusted = 1;
  std::optional<double> cohen_d;  ///< empty for zero-variance differences
  std::size_t n_pairs = 0;
  bool all_zero = false;  ///< every paired difference was zero
  bool significant = false;
};

struct CompareOptions {
  double alpha = 0.05;
  /// Number of tests for the Bonferroni correction; 0 = number of features.
  std::size_t tests = 0;
};

/// Compares two matrices row-paired by parent doc_id. Pairs with a missing
/// value in a feature are left out of that feature's statistics.
/// Throws AlignmentError when the parent ids differ or repeat, ModelError when
/// the feature columns differ.
std::vector<ComparisonResult> compare_features(const FeatureMatrix& human, const FeatureMatrix& llm,
                                               const CompareOptions& options = {});

/// (feature id, importance) pairs, most important first.
using ImportanceRanking = std::vector<std::pair<std::string, double>>;

/// Reorders results to follow `ranking`; features absent from it keep their
/// relative order at the end.
std::vector<ComparisonResult> order_by_importance(std::vector<ComparisonResult> results,
                                                  const ImportanceRanking& ranking);

/// Orders by |log ratio| descending; undefined ratios go last.
std::vector<ComparisonResult> order_by_log_ratio(std::vector<ComparisonResult> results);

std::string comparison_csv(const std::vector<ComparisonResult>& results);
nlohmann::json comparison_json(const std::vector<ComparisonResult>& results);

}  // namespace stylo
