#include "context.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "stylo/error.hpp"
#include "stylo/hash.hpp"

namespace stylo::cli {

namespace fs = std::filesystem;

void Context::load_config() {
  if (options.config.empty()) return;
  check_exists(options.config);
  const auto text = read_file(options.config);
  try {
    config = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CliError(kDataError, "config " + options.config + " is not valid JSON: " + e.what());
  }
  if (!config.is_object()) throw CliError(kDataError, "config " + options.config + " must be a JSON object");
  config_hash = sha256_hex(text);
}

nlohmann::json Context::section(const std::string& name) const {
  if (config.contains(name) && config[name].is_object()) return config[name];
  return nlohmann::json::object();
}

const FeatureCatalog& Context::catalog(bool require_full) {
  if (!catalog_) {
    std::string path = options.catalog;
    if (path.empty()) {
      const char* env = std::getenv("STYLO_CATALOG");
      path = env && *env ? env : STYLO_DEFAULT_CATALOG;
    }
    check_exists(path);
    catalog_ = std::make_unique<FeatureCatalog>(FeatureCatalog::load(path));
  }
  if (require_full && catalog_->size() != 66) {
    throw CliError(kDataError, "catalog defines " + std::to_string(catalog_->size()) +
                                   " features, expected 66 (use --partial-catalog to allow this)");
  }
  return *catalog_;
}

std::optional<std::string> Context::catalog_hash() const {
  if (!catalog_) return std::nullopt;
  return catalog_->content_hash();
}

nlohmann::json Context::metadata(const std::string& command) const {
  nlohmann::json j = {{"tool", "stylo"},
                      {"version", STYLO_VERSION},
                      {"command", command},
                      {"seed", options.seed},
                      {"config_hash", config_hash}};
  const auto h = catalog_hash();
  j["catalog_hash"] = h ? nlohmann::json(*h) : nlohmann::json(nullptr);
  return j;
}

std::vector<std::pair<std::string, std::string>> Context::metadata_pairs(const std::string& command) const {
  const auto h = catalog_hash();
  return {{"tool", "stylo"},
          {"version", STYLO_VERSION},
          {"command", command},
          {"seed", std::to_string(options.seed)},
          {"catalog_hash", h ? *h : "none"},
          {"config_hash", config_hash}};
}

fs::path Context::out(const std::string& name) const {
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw CliError(kCantCreate, "cannot create output directory " + options.out_dir + ": " + ec.message());
  return fs::path(options.out_dir) / name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kCantCreate, "cannot write " + path.string());
  out << content;
  if (!out) throw CliError(kCantCreate, "write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kNoInput, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string with_metadata(const std::vector<std::pair<std::string, std::string>>& meta, const std::string& csv) {
  std::string out;
  for (const auto& [k, v] : meta) out += "# " + k + ": " + v + "\n";
  return out + csv;
}

void check_exists(const std::string& path) {
  if (!fs::exists(path)) throw CliError(kNoInput, "no such file or directory: " + path);
}

std::vector<fs::path> collect_conllu(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    check_exists(in);
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".conllu") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  if (files.empty()) throw CliError(kNoInput, "no CoNLL-U input files");
  return files;
}

LoadedCorpus load_corpus(const std::vector<fs::path>& files) {
  LoadedCorpus out;
  std::set<std::string> seen;
  for (const auto& f : files) {
    ParseOptions opts;
    opts.default_doc_id = f.stem().string();
    auto parsed = parse_conllu_lenient(read_file(f), opts);
    for (auto& e : parsed.errors) {
      e.message = f.filename().string() + ": " + e.message;
      out.errors.push_back(std::move(e));
    }
    for (auto& d : parsed.documents) {
      if (!seen.insert(d.doc_id).second) {
        out.errors.push_back({d.doc_id, 0, f.filename().string() + ": duplicate doc_id"});
        continue;
      }
      out.documents.push_back(std::move(d));
    }
  }
  return out;
}

FeatureMatrix load_matrices(const std::vector<std::string>& paths) {
  std::vector<FeatureMatrix> parts;
  for (const auto& p : paths) {
    check_exists(p);
    parts.push_back(FeatureMatrix::load(p));
  }
  return concat(parts);
}

}  // namespace stylo::cli
