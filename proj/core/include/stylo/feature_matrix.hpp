#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stylo/conllu.hpp"
#include "stylo/tagger.hpp"

namespace stylo {

struct FeatureRow {
  std::string doc_id;
  std::string source;
  std::size_t word_count = 0;
  std::vector<double> values;  ///< NaN marks a missing value

  bool complete() const noexcept;
};

/// Rows of per-document feature values with a fixed column order. Serialized
/// as CSV: optional "# key: value" metadata lines, then the header
/// doc_id,source,word_count,<feature ids...>.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::vector<std::string> feature_ids) : feature_ids_(std::move(feature_ids)) {}

  const std::vector<std::string>& feature_ids() const noexcept { return feature_ids_; }
  const std::vector<FeatureRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const FeatureRow& operator[](std::size_t i) const { return rows_[i]; }

  /// Throws ModelError when the row width does not match the columns.
  void add_row(FeatureRow row);

  /// Column position of a feature id; throws ModelError naming a missing id.
  std::size_t column(const std::string& feature_id) const;

  /// Distinct source labels in lexicographic order.
  std::vector<std::string> labels() const;

  FeatureMatrix select_rows(const std::vector<std::size_t>& indices) const;
  FeatureMatrix filter_sources(const std::vector<std::string>& sources) const;
  /// Drops rows with any missing value; returns the number dropped.
  std::size_t drop_incomplete();

  std::vector<std::pair<std::string, std::string>>& metadata() noexcept { return metadata_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept { return metadata_; }

  std::string to_csv() const;
  static FeatureMatrix from_csv(std::string_view text);
  static FeatureMatrix load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<std::string> feature_ids_;
  std::vector<FeatureRow> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

/// Rows of all matrices in order. Throws ModelError when the columns differ.
/// Metadata is taken from the first matrix.
FeatureMatrix concat(const std::vector<FeatureMatrix>& parts);

struct TagCorpusResult {
  FeatureMatrix matrix;
  std::vector<DocumentError> errors;  ///< documents that could not be tagged
};

/// Tags every document. Failed documents are listed in `errors` and omitted
/// from the matrix; surviving rows keep input order. `threads` = 0 picks the
/// hardware concurrency.
TagCorpusResult tag_corpus(const std::vector<AnnotatedDocument>& docs, const FeatureCatalog& catalog,
                           unsigned threads = 0);

std::string errors_to_csv(const std::vector<DocumentError>& errors);

}  // namespace stylo
