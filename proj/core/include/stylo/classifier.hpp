#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylo/feature_matrix.hpp"

namespace stylo {

struct Prediction {
  std::vector<std::string> labels;
  /// Per-row class scores aligned with Classifier::class_labels().
  std::vector<std::vector<double>> scores;
};

/// Common interface of the trained models. Class labels are sorted; ties in
/// the decision go to the lexicographically lowest label.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string kind() const = 0;
  virtual const std::vector<std::string>& class_labels() const = 0;
  virtual const std::vector<std::string>& feature_ids() const = 0;

  /// Predicts every row. Columns are looked up by feature id, so extra columns
  /// are ignored. Throws ModelError for a missing column or a missing value.
  virtual Prediction predict(const FeatureMatrix& rows) const = 0;

  virtual nlohmann::json to_json() const = 0;
};

/// Rows of `m` projected onto `feature_ids` in that order; throws ModelError
/// for missing columns or values.
std::vector<std::vector<double>> design_matrix(const FeatureMatrix& m, const std::vector<std::string>& feature_ids);

}  // namespace stylo
