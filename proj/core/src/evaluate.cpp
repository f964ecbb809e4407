#include "stylo/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "stylo/csv.hpp"
#include "stylo/error.hpp"
#include "stylo/forest.hpp"
#include "stylo/lasso.hpp"

namespace stylo {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

std::size_t ConfusionMatrix::correct() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
  return n;
}

double ConfusionMatrix::accuracy() const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(n);
}

std::size_t ConfusionMatrix::index_of(const std::string& label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) throw ModelError("label not in confusion matrix: " + label);
  return static_cast<std::size_t>(it - labels.begin());
}

std::optional<double> ConfusionMatrix::llm_to_human(const std::string& human) const {
  const auto h = index_of(human);
  std::size_t rows = 0, hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i == h) continue;
    for (auto c : counts[i]) rows += c;
    hits += counts[i][h];
  }
  if (rows == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(rows);
}

std::optional<double> ConfusionMatrix::human_to_llm(const std::string& human) const {
  const auto h = index_of(human);
  std::size_t rows = 0;
  for (auto c : counts[h]) rows += c;
  if (rows == 0) return std::nullopt;
  return static_cast<double>(rows - counts[h][h]) / static_cast<double>(rows);
}

std::string ConfusionMatrix::to_csv() const {
  std::ostringstream out;
  out << "true\\predicted";
  for (const auto& l : labels) out << ',' << csv::escape(l);
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << csv::escape(labels[i]);
    for (auto c : counts[i]) out << ',' << c;
    out << '\n';
  }
  return out.str();
}

nlohmann::json ConfusionMatrix::to_json() const {
  nlohmann::json j = {{"labels", labels}, {"counts", counts}, {"total", total()}, {"accuracy", accuracy()}};
  if (std::binary_search(labels.begin(), labels.end(), std::string(kHumanChunk2))) {
    auto a = llm_to_human(), b = human_to_llm();
    j["llm_to_human"] = a ? nlohmann::json(*a) : nlohmann::json(nullptr);
    j["human_to_llm"] = b ? nlohmann::json(*b) : nlohmann::json(nullptr);
  }
  return j;
}

ConfusionMatrix confusion(const std::vector<std::string>& truth, const std::vector<std::string>& predicted) {
  if (truth.size() != predicted.size()) throw ModelError("truth and prediction lengths differ");
  std::set<std::string> all(truth.begin(), truth.end());
  all.insert(predicted.begin(), predicted.end());
  ConfusionMatrix m;
  m.labels.assign(all.begin(), all.end());
  m.counts.assign(m.labels.size(), std::vector<std::size_t>(m.labels.size(), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++m.counts[m.index_of(truth[i])][m.index_of(predicted[i])];
  return m;
}

Evaluation evaluate(const Classifier& model, const FeatureMatrix& test) {
  if (test.empty()) throw ModelError("evaluation set is empty");
  Evaluation e;
  e.prediction = model.predict(test);
  std::vector<std::string> truth;
  for (const auto& r : test.rows()) {
    truth.push_back(r.source);
    e.doc_ids.push_back(r.doc_id);
  }
  e.confusion = confusion(truth, e.prediction.labels);
  return e;
}

nlohmann::json CrossCorpusReport::to_json() const {
  nlohmann::json preds = nlohmann::json::array();
  for (std::size_t i = 0; i < evaluation.doc_ids.size(); ++i) {
    preds.push_back({{"doc_id", evaluation.doc_ids[i]}, {"predicted", evaluation.prediction.labels[i]}});
  }
  return {{"train_corpus", train_corpus},
          {"test_corpus", test_corpus},
          {"confusion", evaluation.confusion.to_json()},
          {"predictions", std::move(preds)}};
}

CrossCorpusReport cross_corpus_eval(const Classifier& model, const FeatureMatrix& other, std::string train_corpus,
                                    std::string test_corpus) {
  if (other.feature_ids() != model.feature_ids()) {
    throw ModelError("feature catalog mismatch between model (" + std::to_string(model.feature_ids().size()) +
                     " features) and " + test_corpus + " (" + std::to_string(other.feature_ids().size()) +
                     " features)");
  }
  return {std::move(train_corpus), std::move(test_corpus), evaluate(model, other)};
}

nlohmann::json model_to_json(const Classifier& model) {
  return {{"format", "stylo-model"}, {"version", kModelFormatVersion}, {"type", model.kind()}, {"model", model.to_json()}};
}

std::unique_ptr<Classifier> model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "stylo-model") throw ModelError("not a stylo model file");
  const int version = j.value("version", -1);
  if (version != kModelFormatVersion) throw ModelError("unsupported model version " + std::to_string(version));
  const std::string type = j.value("type", "");
  if (!j.contains("model")) throw ModelError("model file has no model body");
  if (type == "random_forest") return std::make_unique<ForestModel>(ForestModel::from_json(j["model"]));
  if (type == "lasso_logistic") return std::make_unique<LassoModel>(LassoModel::from_json(j["model"]));
  throw ModelError("unknown model type '" + type + "'");
}

void save_model(const Classifier& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << model_to_json(model).dump() << '\n';
}

std::unique_ptr<Classifier> load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace stylo
