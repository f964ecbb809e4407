#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stylo/feature_matrix.hpp"

namespace stylo {

struct DatasetSplit {
  double train_fraction = 0.75;
  std::uint64_t seed = 1;
  bool stratified = true;
  /// Keep rows that share a parent doc_id on the same side.
  bool group_by_parent = true;
};

struct SplitResult {
  FeatureMatrix train;
  FeatureMatrix test;
  std::vector<std::size_t> train_rows;  ///< indices into the input, ascending
  std::vector<std::size_t> test_rows;
};

/// Partitions rows into train and test. Groups of rows sharing a parent id
/// are the unit of assignment; with stratification the groups are bucketed by
/// their label composition and each bucket is apportioned separately (largest
/// remainder), so the train side receives round(groups * fraction) groups.
/// Throws ModelError for an invalid fraction or a class with fewer than 2 rows.
SplitResult split(const FeatureMatrix& matrix, const DatasetSplit& spec);

/// Assigns each row to one of `folds` folds with the same grouping and
/// stratification rules. Returns the fold index per row.
std::vector<std::size_t> assign_folds(const FeatureMatrix& matrix, std::size_t folds, std::uint64_t seed,
                                      bool group_by_parent = true);

}  // namespace stylo
