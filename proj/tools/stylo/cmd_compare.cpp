#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "context.hpp"
#include "stylo/compare.hpp"
#include "stylo/csv.hpp"

namespace stylo::cli {

namespace {

struct CompareArgs {
  std::vector<std::string> matrices;
  std::string human = std::string(kHumanChunk2);
  std::string llm;
  double alpha = 0.05;
  std::size_t tests = 0;
  std::size_t top_k = 15;
  std::string importance;
};

ImportanceRanking read_importance(const std::string& path) {
  check_exists(path);
  std::istringstream in(read_file(path));
  ImportanceRanking r;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = csv::split(line);
    if (f.size() < 2) throw CliError(kDataError, "malformed importance row: " + line);
    r.emplace_back(f[0], csv::parse_number(f[1]));
  }
  return r;
}

void run_compare(Context& ctx, const CompareArgs& args) {
  for (const auto& m : args.matrices) check_exists(m);
  if (!args.importance.empty()) check_exists(args.importance);
  const auto merged = load_matrices(args.matrices);
  auto labels = merged.labels();
  std::string llm = args.llm;
  if (llm.empty()) {
    std::set<std::string> others(labels.begin(), labels.end());
    others.erase(args.human);
    others.erase(std::string(kHumanChunk1));
    if (others.size() != 1) throw CliError(kDataError, "cannot infer the LLM source; pass --llm");
    llm = *others.begin();
  }
  const auto human = merged.filter_sources({args.human});
  const auto other = merged.filter_sources({llm});
  if (human.empty()) throw CliError(kDataError, "no rows with source " + args.human);
  if (other.empty()) throw CliError(kDataError, "no rows with source " + llm);

  CompareOptions opts;
  opts.alpha = args.alpha;
  opts.tests = args.tests;
  const auto results = compare_features(human, other, opts);

  std::string ranked_by = "abs_log_ratio";
  std::vector<ComparisonResult> ordered;
  if (!args.importance.empty()) {
    ordered = order_by_importance(results, read_importance(args.importance));
    ranked_by = "importance";
  } else {
    ordered = order_by_log_ratio(results);
  }
  if (ordered.size() > args.top_k) ordered.resize(args.top_k);

  auto meta = ctx.metadata_pairs("compare");
  meta.emplace_back("human", args.human);
  meta.emplace_back("llm", llm);
  write_file(ctx.out("comparison.csv"), with_metadata(meta, comparison_csv(results)));
  meta.emplace_back("ranked_by", ranked_by);
  write_file(ctx.out("top_features.csv"), with_metadata(meta, comparison_csv(ordered)));

  nlohmann::json top = nlohmann::json::array();
  for (const auto& r : ordered) top.push_back(r.feature_id);
  std::size_t significant = 0;
  for (const auto& r : results) significant += r.significant ? 1 : 0;
  const nlohmann::json j = {{"metadata", ctx.metadata("compare")},
                            {"human", args.human},
                            {"llm", llm},
                            {"alpha", args.alpha},
                            {"tests", args.tests ? args.tests : results.size()},
                            {"significant", significant},
                            {"ranked_by", ranked_by},
                            {"top", std::move(top)},
                            {"results", comparison_json(results)}};
  write_file(ctx.out("comparison.json"), j.dump(2) + "\n");
  std::cout << significant << " of " << results.size() << " features differ significantly (" << llm << " vs "
            << args.human << ", Bonferroni alpha " << args.alpha << ")\n";
}

struct ReportArgs {
  std::string comparison;
  std::string evaluation;
  std::size_t top = 15;
};

std::string fmt(const nlohmann::json& v, int precision = 3) {
  if (v.is_null()) return "NA";
  if (!v.is_number()) return v.dump();
  std::ostringstream s;
  s << std::setprecision(precision) << v.get<double>();
  return s.str();
}

nlohmann::json load_json(const std::string& path) {
  check_exists(path);
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CliError(kDataError, path + " is not valid JSON: " + e.what());
  }
}

void comparison_section(std::ostream& out, const nlohmann::json& c, std::size_t top) {
  out << "## Feature comparison: " << c.value("llm", "?") << " vs " << c.value("human", "?") << "\n\n";
  out << c.value("significant", 0) << " of " << c.at("results").size() << " features differ at Bonferroni-adjusted alpha "
      << fmt(c.value("alpha", nlohmann::json())) << ".\n\n";
  std::map<std::string, nlohmann::json> by_id;
  for (const auto& r : c.at("results")) by_id[r.at("feature").get<std::string>()] = r;
  out << "| feature | human rate | LLM rate | ratio | p (adj) | d |\n|---|---|---|---|---|---|\n";
  std::size_t shown = 0;
  for (const auto& id : c.at("top")) {
    if (shown++ == top) break;
    const auto& r = by_id.at(id.get<std::string>());
    out << "| " << id.get<std::string>() << " | " << fmt(r["human_rate"]) << " | " << fmt(r["llm_rate"]) << " | "
        << fmt(r["ratio"]) << " | " << fmt(r["p_adj"]) << " | " << fmt(r["d"]) << " |\n";
  }
  out << '\n';
}

void evaluation_section(std::ostream& out, const nlohmann::json& e, std::size_t top) {
  const auto& cm = e.at("confusion");
  out << "## Classifier: " << e.value("model", "?") << " (" << e.value("mode", "?") << ")\n\n";
  out << "Test accuracy " << fmt(cm.at("accuracy")) << " on " << cm.at("total") << " documents.\n";
  if (cm.contains("llm_to_human")) {
    out << "LLM texts classified as human: " << fmt(cm["llm_to_human"]) << "; human texts classified as LLM: "
        << fmt(cm["human_to_llm"]) << ".\n";
  }
  out << "\n| true \\ predicted |";
  for (const auto& l : cm.at("labels")) out << ' ' << l.get<std::string>() << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < cm.at("labels").size(); ++i) out << "---|";
  out << '\n';
  for (std::size_t i = 0; i < cm.at("labels").size(); ++i) {
    out << "| " << cm["labels"][i].get<std::string>() << " |";
    for (const auto& c : cm["counts"][i]) out << ' ' << c << " |";
    out << '\n';
  }
  if (e.contains("importance")) {
    out << "\nMost important features:\n\n";
    std::size_t shown = 0;
    for (const auto& r : e["importance"]) {
      if (shown++ == top) break;
      out << "- " << r.at("feature").get<std::string>() << " " << fmt(r.at("importance")) << '\n';
    }
  }
  out << '\n';
}

void run_report(Context& ctx, const ReportArgs& args) {
  if (args.comparison.empty() && args.evaluation.empty()) {
    throw CliError(kUsage, "report needs --comparison and/or --evaluation");
  }
  nlohmann::json comparison, evaluation;
  if (!args.comparison.empty()) comparison = load_json(args.comparison);
  if (!args.evaluation.empty()) evaluation = load_json(args.evaluation);
  std::ostringstream out;
  out << "# Stylometry report\n\n";
  try {
    if (!comparison.is_null()) comparison_section(out, comparison, args.top);
    if (!evaluation.is_null()) evaluation_section(out, evaluation, args.top);
  } catch (const nlohmann::json::exception& e) {
    throw CliError(kDataError, std::string("unexpected report input: ") + e.what());
  }
  write_file(ctx.out("report.md"), out.str());
  std::cout << out.str();
}

}  // namespace

void add_compare_command(CLI::App& app, Context& ctx) {
  auto args = std::make_shared<CompareArgs>();
  auto* cmd = app.add_subcommand("compare", "Paired feature comparison between human and LLM documents");
  cmd->add_option("matrices", args->matrices, "Feature-matrix CSV files holding both sources")->required();
  cmd->add_option("--human", args->human, "Human source label")->capture_default_str();
  cmd->add_option("--llm", args->llm, "LLM source label (inferred when only one other source exists)");
  cmd->add_option("--alpha", args->alpha, "Significance level after correction")->capture_default_str();
  cmd->add_option("--tests", args->tests, "Number of tests for the Bonferroni correction (0 = features)")
      ->capture_default_str();
  cmd->add_option("--top-k", args->top_k, "Rows in the top-feature table")->capture_default_str();
  cmd->add_option("--importance", args->importance, "importance.csv ranking the top table (default: |log ratio|)");
  cmd->callback([&ctx, args] { run_compare(ctx, *args); });
}

void add_report_command(CLI::App& app, Context& ctx) {
  auto args = std::make_shared<ReportArgs>();
  auto* cmd = app.add_subcommand("report", "Summarize comparison and evaluation outputs as Markdown");
  cmd->add_option("--comparison", args->comparison, "comparison.json from the compare command");
  cmd->add_option("--evaluation", args->evaluation, "evaluation.json from the classify command");
  cmd->add_option("--top", args->top, "Rows per table")->capture_default_str();
  cmd->callback([&ctx, args] { run_report(ctx, *args); });
}

}  // namespace stylo::cli
