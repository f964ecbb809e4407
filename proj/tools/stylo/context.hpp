#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stylo/catalog.hpp"
#include "stylo/conllu.hpp"
#include "stylo/feature_matrix.hpp"

namespace stylo::cli {

// sysexits(3) values.
enum ExitCode : int {
  kOk = 0,
  kUsage = 64,
  kDataError = 65,
  kNoInput = 66,
  kUnavailable = 69,
  kSoftware = 70,
  kCantCreate = 73,
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string catalog;
  std::string out_dir = ".";
  std::string config;
};

class Context {
 public:
  GlobalOptions options;
  nlohmann::json config = nlohmann::json::object();
  std::string config_hash = "none";

  void load_config();
  /// config[name] or an empty object.
  nlohmann::json section(const std::string& name) const;

  /// Loads the catalog once. With `require_full` the catalog must define the
  /// standard 66 features.
  const FeatureCatalog& catalog(bool require_full = true);
  std::optional<std::string> catalog_hash() const;

  /// Run metadata for JSON outputs. No timestamps, so reruns are byte-identical.
  nlohmann::json metadata(const std::string& command) const;
  /// The same metadata as "key: value" pairs for CSV headers.
  std::vector<std::pair<std::string, std::string>> metadata_pairs(const std::string& command) const;

  /// Path inside the output directory, which is created on first use.
  std::filesystem::path out(const std::string& name) const;

 private:
  std::unique_ptr<FeatureCatalog> catalog_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// CSV text with "# key: value" lines in front.
std::string with_metadata(const std::vector<std::pair<std::string, std::string>>& meta, const std::string& csv);

/// Expands files and directories (*.conllu, sorted, non-recursive) into a file
/// list. Throws CliError(kNoInput) for a missing path or when nothing is found.
std::vector<std::filesystem::path> collect_conllu(const std::vector<std::string>& inputs);

struct LoadedCorpus {
  std::vector<AnnotatedDocument> documents;
  std::vector<DocumentError> errors;  ///< doc_id is prefixed with the file name
};

/// Parses every file leniently. Implicit document ids use the file stem.
/// Repeated doc_ids are reported as errors and dropped.
LoadedCorpus load_corpus(const std::vector<std::filesystem::path>& files);

/// Loads and concatenates feature matrices; throws CliError(kNoInput) for a
/// missing file.
FeatureMatrix load_matrices(const std::vector<std::string>& paths);

void check_exists(const std::string& path);

// Subcommand registration. Each adds a subcommand to `app` whose callback
// runs against `ctx`.
void add_chunk_command(CLI::App& app, Context& ctx);
void add_tag_command(CLI::App& app, Context& ctx);
void add_vocab_command(CLI::App& app, Context& ctx);
void add_compare_command(CLI::App& app, Context& ctx);
void add_report_command(CLI::App& app, Context& ctx);
void add_classify_command(CLI::App& app, Context& ctx);
void add_generate_command(CLI::App& app, Context& ctx);

}  // namespace stylo::cli
