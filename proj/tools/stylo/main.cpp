#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "context.hpp"
#include "stylo/error.hpp"

namespace {

using stylo::cli::CliError;
using stylo::cli::Context;

bool given(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::string scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

// Appends "--key value" for config entries the command line leaves unset.
void inject(const nlohmann::json& section, const CLI::App& target, std::vector<std::string>& args) {
  std::vector<std::string> extra;
  for (const auto& [key, value] : section.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_object() || given(args, flag)) continue;
    const auto* opt = target.get_option_no_throw(flag);
    if (opt == nullptr) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
      continue;
    }
    extra.push_back(flag);
    if (value.is_array()) {
      for (const auto& v : value) extra.push_back(scalar(v));
    } else {
      extra.push_back(scalar(value));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  CLI::App app{"Corpus stylometry toolkit: chunking, feature tagging, comparison, classification, generation"};
  app.set_version_flag("--version", STYLO_VERSION);
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", ctx.options.seed, "Random seed recorded in every output")->capture_default_str();
  app.add_option("--catalog", ctx.options.catalog, "Feature catalog JSON (default: bundled 66-feature catalog)");
  app.add_option("--out-dir", ctx.options.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--config", ctx.options.config, "JSON config; per-command sections supply option defaults");

  stylo::cli::add_chunk_command(app, ctx);
  stylo::cli::add_tag_command(app, ctx);
  stylo::cli::add_compare_command(app, ctx);
  stylo::cli::add_vocab_command(app, ctx);
  stylo::cli::add_classify_command(app, ctx);
  stylo::cli::add_generate_command(app, ctx);
  stylo::cli::add_report_command(app, ctx);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // Config values become ordinary arguments so the command line wins.
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) ctx.options.config = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) ctx.options.config = args[i].substr(9);
    }
    ctx.load_config();
    inject(ctx.config, app, args);
    for (const auto* sub : app.get_subcommands({})) {
      if (given(args, sub->get_name())) inject(ctx.section(sub->get_name()), *sub, args);
    }
  } catch (const CliError& e) {
    std::cerr << "stylo: " << e.what() << '\n';
    return e.code();
  }

  std::vector<char*> cargv{argv[0]};
  for (auto& a : args) cargv.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : stylo::cli::kUsage;
  } catch (const CliError& e) {
    std::cerr << "stylo: " << e.what() << '\n';
    return e.code();
  } catch (const stylo::ApiError& e) {
    std::cerr << "stylo: " << e.what() << '\n';
    return stylo::cli::kUnavailable;
  } catch (const stylo::Error& e) {
    std::cerr << "stylo: " << e.what() << '\n';
    return stylo::cli::kDataError;
  } catch (const std::exception& e) {
    std::cerr << "stylo: internal error: " << e.what() << '\n';
    return stylo::cli::kSoftware;
  }
  return stylo::cli::kOk;
}
