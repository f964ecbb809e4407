#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace stylo {

struct ManifestEntry {
  std::string source;
  std::string genre;
  std::string path;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// JSON corpus manifest: doc_id -> {source, genre, path}, plus free-form run
/// metadata and optional extra sections written by the producing command.
struct CorpusManifest {
  nlohmann::json metadata = nlohmann::json::object();
  std::map<std::string, ManifestEntry> documents;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
  static CorpusManifest from_json(const nlohmann::json& j);

  static CorpusManifest load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace stylo
