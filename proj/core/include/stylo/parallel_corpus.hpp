#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylo/chunking.hpp"
#include "stylo/filter.hpp"
#include "stylo/generate.hpp"
#include "stylo/manifest.hpp"

namespace stylo {

struct GenerationResult {
  std::string doc_id;  ///< "<parent>#<provider label>"
  std::string parent;
  std::string provider;
  std::string model;
  std::string raw_text;
  std::string text;  ///< filtered text, empty unless accepted
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  std::string error;
  std::size_t word_count = 0;
  std::string prompt_hash;
  std::string requested_at;  ///< UTC ISO-8601
  std::string responded_at;
  std::size_t attempts = 0;

  nlohmann::json to_json() const;
};

struct ProviderStats {
  std::size_t attempted = 0;
  std::size_t accepted = 0;
  std::size_t refusal = 0;
  std::size_t too_short = 0;
  std::size_t api_error = 0;

  nlohmann::json to_json() const;
};

using Generator = std::function<GenerationCall(const ProviderConfig&, const Prompt&)>;

struct ParallelCorpus {
  std::vector<GenerationResult> results;      ///< every attempt, sorted by doc_id
  std::vector<std::string> complete_parents;  ///< parents accepted by every provider, sorted
  std::map<std::string, ProviderStats> stats;  ///< by provider label

  /// Manifest of the complete-case documents, one entry per provider text.
  /// Paths are relative to the output directory; per-provider statistics go
  /// in the extra section.
  CorpusManifest manifest() const;

  /// Writes texts/<provider>/<parent>.txt for accepted results,
  /// generation_log.jsonl with every result, and manifest.json.
  void write(const std::string& out_dir, const nlohmann::json& metadata = nlohmann::json::object()) const;
};

/// Runs every (pair, provider) request, at most `concurrency` at a time per
/// provider. Generator failures of type ApiError become api_error rejections.
ParallelCorpus assemble_parallel_corpus(const std::vector<ChunkPair>& pairs,
                                        const std::vector<ProviderConfig>& providers, const PromptTemplate& tmpl,
                                        const FilterPolicy& policy, const Generator& generator = generate);

}  // namespace stylo
