#include "stylo/manifest.hpp"

#include <fstream>

#include "stylo/error.hpp"

namespace stylo {

nlohmann::json CorpusManifest::to_json() const {
  nlohmann::json docs = nlohmann::json::object();
  for (const auto& [id, e] : documents) {
    docs[id] = {{"source", e.source}, {"genre", e.genre}, {"path", e.path}};
  }
  nlohmann::json j = extra;
  j["metadata"] = metadata;
  j["documents"] = std::move(docs);
  return j;
}

CorpusManifest CorpusManifest::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("documents") || !j["documents"].is_object()) {
    throw ParseError("manifest must be an object with a 'documents' object");
  }
  CorpusManifest m;
  for (const auto& [id, e] : j["documents"].items()) {
    if (!e.is_object() || !e.contains("source") || !e["source"].is_string()) {
      throw ParseError("manifest entry '" + id + "' lacks a source name");
    }
    m.documents[id] = ManifestEntry{e["source"].get<std::string>(), e.value("genre", std::string()),
                                    e.value("path", std::string())};
  }
  if (j.contains("metadata")) m.metadata = j["metadata"];
  for (const auto& [k, v] : j.items()) {
    if (k != "metadata" && k != "documents") m.extra[k] = v;
  }
  return m;
}

CorpusManifest CorpusManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void CorpusManifest::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << to_json().dump(2) << '\n';
}

}  // namespace stylo
