#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylo/classifier.hpp"

namespace stylo {

/// Counts with rows = true label and columns = predicted label.
struct ConfusionMatrix {
  std::vector<std::string> labels;  ///< sorted
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t correct() const;
  double accuracy() const;
  std::size_t index_of(const std::string& label) const;  ///< throws ModelError if absent
  /// Share of rows whose true label is not `human` that were predicted `human`.
  std::optional<double> llm_to_human(const std::string& human = std::string(kHumanChunk2)) const;
  /// Share of rows labelled `human` that were predicted as something else.
  std::optional<double> human_to_llm(const std::string& human = std::string(kHumanChunk2)) const;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Label set is the union of both sequences. Throws ModelError on length mismatch.
ConfusionMatrix confusion(const std::vector<std::string>& truth, const std::vector<std::string>& predicted);

struct Evaluation {
  ConfusionMatrix confusion;
  Prediction prediction;
  std::vector<std::string> doc_ids;
};

Evaluation evaluate(const Classifier& model, const FeatureMatrix& test);

struct CrossCorpusReport {
  std::string train_corpus;
  std::string test_corpus;
  Evaluation evaluation;

  nlohmann::json to_json() const;
};

/// Evaluates a model on a matrix from another corpus. The feature ids must
/// match the model's exactly, otherwise ModelError is thrown.
CrossCorpusReport cross_corpus_eval(const Classifier& model, const FeatureMatrix& other, std::string train_corpus,
                                    std::string test_corpus);

inline constexpr int kModelFormatVersion = 1;

/// Versioned JSON envelope: {"format", "version", "type", "model"}.
nlohmann::json model_to_json(const Classifier& model);
std::unique_ptr<Classifier> model_from_json(const nlohmann::json& j);
void save_model(const Classifier& model, const std::string& path);
std::unique_ptr<Classifier> load_model(const std::string& path);

}  // namespace stylo
