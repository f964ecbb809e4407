#include "stylo/classifier.hpp"

#include <cmath>

#include "stylo/error.hpp"

namespace stylo {

std::vector<std::vector<double>> design_matrix(const FeatureMatrix& m, const std::vector<std::string>& feature_ids) {
  std::vector<std::size_t> cols;
  cols.reserve(feature_ids.size());
  for (const auto& id : feature_ids) cols.push_back(m.column(id));
  std::vector<std::vector<double>> x(m.size(), std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double v = m[i].values[cols[j]];
      if (std::isnan(v)) throw ModelError("missing value for " + feature_ids[j] + " in " + m[i].doc_id);
      x[i][j] = v;
    }
  }
  return x;
}

}  // namespace stylo
