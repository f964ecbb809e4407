#include <iostream>
#include <set>
#include <sstream>

#include "context.hpp"
#include "stylo/csv.hpp"
#include "stylo/error.hpp"
#include "stylo/evaluate.hpp"
#include "stylo/forest.hpp"
#include "stylo/lasso.hpp"
#include "stylo/split.hpp"

namespace stylo::cli {

namespace {

struct ClassifyArgs {
  std::vector<std::string> matrices;
  std::string model = "forest";
  std::string mode = "multiclass";
  std::vector<std::string> labels;
  std::size_t trees = 500;
  std::size_t max_features = 8;
  std::size_t min_leaf = 1;
  std::size_t max_depth = 0;
  std::size_t folds = 5;
  double train_fraction = 0.75;
  bool no_group = false;
  unsigned threads = 0;
  std::vector<std::string> cross;
  std::string train_corpus = "train";
  std::string test_corpus = "cross";
};

FeatureMatrix prepare(FeatureMatrix m, const std::vector<std::string>& labels, const std::string& what) {
  if (!labels.empty()) m = m.filter_sources(labels);
  const auto dropped = m.drop_incomplete();
  if (dropped) std::cerr << "warning: dropped " << dropped << " " << what << " row(s) with missing values\n";
  return m;
}

ImportanceRanking lasso_importance(const LassoModel& m) {
  ImportanceRanking r;
  double total = 0;
  for (double b : m.coefficients()) total += std::abs(b);
  const auto& ids = m.feature_ids();
  for (std::size_t j = 0; j < ids.size(); ++j) {
    r.emplace_back(ids[j], total > 0 ? std::abs(m.coefficients()[j]) / total : 1.0 / static_cast<double>(ids.size()));
  }
  std::stable_sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return r;
}

std::string ranking_csv(const ImportanceRanking& r) {
  std::string out = "feature,importance\n";
  for (const auto& [id, v] : r) out += csv::escape(id) + "," + csv::format_number(v) + "\n";
  return out;
}

std::string predictions_csv(const Evaluation& e, const FeatureMatrix& test) {
  std::string out = "doc_id,true,predicted\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    out += csv::join({test[i].doc_id, test[i].source, e.prediction.labels[i]}) + "\n";
  }
  return out;
}

void run_classify(Context& ctx, const ClassifyArgs& args) {
  for (const auto& m : args.matrices) check_exists(m);
  for (const auto& m : args.cross) check_exists(m);
  if (args.model != "forest" && args.model != "lasso") throw CliError(kUsage, "--model must be forest or lasso");
  if (args.mode != "multiclass" && args.mode != "pairwise") {
    throw CliError(kUsage, "--mode must be multiclass or pairwise");
  }
  auto data = prepare(load_matrices(args.matrices), args.labels, "training");
  const auto labels = data.labels();
  const bool binary_needed = args.mode == "pairwise" || args.model == "lasso";
  if (binary_needed && labels.size() != 2) {
    std::string found;
    for (const auto& l : labels) found += (found.empty() ? "" : ", ") + l;
    throw CliError(kDataError, "pairwise classification needs exactly 2 sources, found " +
                                   std::to_string(labels.size()) + " (" + found + "); select two with --labels");
  }
  if (labels.size() < 2) throw CliError(kDataError, "classification needs at least 2 sources");

  DatasetSplit spec;
  spec.train_fraction = args.train_fraction;
  spec.seed = ctx.options.seed;
  spec.group_by_parent = !args.no_group;
  const auto parts = split(data, spec);

  std::unique_ptr<Classifier> model;
  ImportanceRanking importance;
  bool degenerate = false;
  if (args.model == "forest") {
    ForestParams p;
    p.n_trees = args.trees;
    p.max_features = args.max_features;
    p.min_samples_leaf = args.min_leaf;
    p.max_depth = args.max_depth;
    p.seed = ctx.options.seed;
    p.threads = args.threads;
    auto forest = ForestModel::train(parts.train, p);
    importance = forest.gini_importance(&degenerate);
    model = std::make_unique<ForestModel>(std::move(forest));
  } else {
    LassoParams p;
    p.folds = args.folds;
    p.seed = ctx.options.seed;
    auto lasso = LassoModel::train(parts.train, p);
    importance = lasso_importance(lasso);
    degenerate = lasso.selected().empty();
    model = std::make_unique<LassoModel>(std::move(lasso));
  }
  if (degenerate) std::cerr << "warning: no informative splits or coefficients; importances are uniform\n";

  const auto eval = evaluate(*model, parts.test);

  auto envelope = model_to_json(*model);
  envelope["metadata"] = ctx.metadata("classify");
  write_file(ctx.out("model.json"), envelope.dump() + "\n");

  nlohmann::json imp = nlohmann::json::array();
  for (const auto& [id, v] : importance) imp.push_back({{"feature", id}, {"importance", v}});
  nlohmann::json report = {{"metadata", ctx.metadata("classify")},
                           {"model", model->kind()},
                           {"mode", args.mode},
                           {"labels", labels},
                           {"split",
                            {{"train_fraction", args.train_fraction},
                             {"grouped_by_parent", !args.no_group},
                             {"train_rows", parts.train.size()},
                             {"test_rows", parts.test.size()}}},
                           {"confusion", eval.confusion.to_json()},
                           {"importance", std::move(imp)},
                           {"importance_degenerate", degenerate}};
  if (const auto* lasso = dynamic_cast<const LassoModel*>(model.get())) {
    report["lambda"] = lasso->lambda();
    nlohmann::json coef = nlohmann::json::object();
    for (std::size_t j = 0; j < lasso->feature_ids().size(); ++j) coef[lasso->feature_ids()[j]] = lasso->coefficients()[j];
    report["coefficients"] = std::move(coef);
  }
  const auto meta = ctx.metadata_pairs("classify");
  write_file(ctx.out("evaluation.json"), report.dump(2) + "\n");
  write_file(ctx.out("confusion.csv"), with_metadata(meta, eval.confusion.to_csv()));
  write_file(ctx.out("importance.csv"), with_metadata(meta, ranking_csv(importance)));
  write_file(ctx.out("predictions.csv"), with_metadata(meta, predictions_csv(eval, parts.test)));
  std::cout << model->kind() << ": test accuracy " << eval.confusion.accuracy() << " on " << parts.test.size()
            << " rows (" << parts.train.size() << " training)\n";

  if (!args.cross.empty()) {
    auto other = prepare(load_matrices(args.cross), labels, "cross-corpus");
    if (other.empty()) throw CliError(kDataError, "cross-corpus matrix has no rows with the model's sources");
    const auto cross = cross_corpus_eval(*model, other, args.train_corpus, args.test_corpus);
    auto j = cross.to_json();
    j["metadata"] = ctx.metadata("classify");
    write_file(ctx.out("cross_corpus.json"), j.dump(2) + "\n");
    write_file(ctx.out("cross_confusion.csv"), with_metadata(meta, cross.evaluation.confusion.to_csv()));
    std::cout << "cross-corpus accuracy (" << args.test_corpus << "): " << cross.evaluation.confusion.accuracy()
              << " on " << other.size() << " rows\n";
  }
}

}  // namespace

void add_classify_command(CLI::App& app, Context& ctx) {
  auto args = std::make_shared<ClassifyArgs>();
  auto* cmd = app.add_subcommand("classify", "Train and evaluate a source classifier on feature matrices");
  cmd->add_option("matrices", args->matrices, "Feature-matrix CSV files")->required();
  cmd->add_option("--model", args->model, "forest or lasso")->capture_default_str();
  cmd->add_option("--mode", args->mode, "multiclass or pairwise")->capture_default_str();
  cmd->add_option("--labels", args->labels, "Restrict to these sources")->delimiter(',');
  cmd->add_option("--trees", args->trees, "Forest size")->capture_default_str();
  cmd->add_option("--max-features", args->max_features, "Features tried per split (0 = sqrt(p))")
      ->capture_default_str();
  cmd->add_option("--min-leaf", args->min_leaf, "Minimum rows per leaf")->capture_default_str();
  cmd->add_option("--max-depth", args->max_depth, "Maximum tree depth (0 = unlimited)")->capture_default_str();
  cmd->add_option("--folds", args->folds, "Cross-validation folds for lasso")->capture_default_str();
  cmd->add_option("--train-fraction", args->train_fraction, "Share of parent groups used for training")
      ->capture_default_str();
  cmd->add_flag("--no-group", args->no_group, "Split rows independently instead of by parent document");
  cmd->add_option("--threads", args->threads, "Training threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--cross", args->cross, "Feature matrices from another corpus to evaluate on");
  cmd->add_option("--train-corpus", args->train_corpus, "Name of the training corpus")->capture_default_str();
  cmd->add_option("--test-corpus", args->test_corpus, "Name of the cross-evaluation corpus")->capture_default_str();
  cmd->callback([&ctx, args] { run_classify(ctx, *args); });
}

}  // namespace stylo::cli
