#include "stylo/parallel_corpus.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "stylo/error.hpp"

namespace stylo {

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::string safe_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '-' || c == '_';
    out += ok ? c : '_';
  }
  if (out.empty() || out[0] == '.') out.insert(out.begin(), '_');
  return out;
}

std::string text_path(const GenerationResult& r) {
  return "texts/" + safe_name(r.provider) + "/" + safe_name(r.parent) + ".txt";
}

}  // namespace

nlohmann::json GenerationResult::to_json() const {
  return {{"doc_id", doc_id},
          {"parent", parent},
          {"provider", provider},
          {"model", model},
          {"status", accepted ? "accepted" : "rejected"},
          {"reason", std::string(to_string(reason))},
          {"error", error},
          {"word_count", word_count},
          {"prompt_hash", prompt_hash},
          {"requested_at", requested_at},
          {"responded_at", responded_at},
          {"attempts", attempts},
          {"raw_text", raw_text}};
}

nlohmann::json ProviderStats::to_json() const {
  return {{"attempted", attempted},
          {"accepted", accepted},
          {"rejected", attempted - accepted},
          {"refusal", refusal},
          {"too_short", too_short},
          {"api_error", api_error}};
}

CorpusManifest ParallelCorpus::manifest() const {
  CorpusManifest m;
  const std::set<std::string> complete(complete_parents.begin(), complete_parents.end());
  std::set<std::string> parents;
  for (const auto& r : results) {
    parents.insert(r.parent);
    if (r.accepted && complete.count(r.parent)) m.documents[r.doc_id] = {r.provider, "", text_path(r)};
  }
  nlohmann::json providers = nlohmann::json::object();
  for (const auto& [name, s] : stats) providers[name] = s.to_json();
  std::vector<std::string> excluded;
  std::set_difference(parents.begin(), parents.end(), complete.begin(), complete.end(), std::back_inserter(excluded));
  m.extra = {{"providers", std::move(providers)},
             {"input_documents", parents.size()},
             {"complete_documents", complete_parents.size()},
             {"excluded", excluded}};
  return m;
}

void ParallelCorpus::write(const std::string& out_dir, const nlohmann::json& metadata) const {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ofstream log(fs::path(out_dir) / "generation_log.jsonl", std::ios::binary);
  if (!log) throw Error("cannot write generation log in " + out_dir);
  for (const auto& r : results) {
    log << r.to_json().dump() << '\n';
    if (!r.accepted) continue;
    const auto path = fs::path(out_dir) / text_path(r);
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << r.text << '\n';
  }
  auto m = manifest();
  m.metadata = metadata;
  m.save((fs::path(out_dir) / "manifest.json").string());
}

ParallelCorpus assemble_parallel_corpus(const std::vector<ChunkPair>& pairs,
                                        const std::vector<ProviderConfig>& providers, const PromptTemplate& tmpl,
                                        const FilterPolicy& policy, const Generator& generator) {
  if (pairs.empty()) throw Error("no chunk pairs to generate from");
  if (providers.empty()) throw Error("no providers configured");
  policy.validate();
  std::set<std::string> labels;
  for (const auto& p : providers) {
    p.validate();
    if (!labels.insert(p.label()).second) throw Error("duplicate provider label: " + p.label());
  }
  std::vector<Prompt> prompts;
  for (const auto& pair : pairs) prompts.push_back(build_prompt(pair.chunk1, tmpl));

  const std::size_t np = providers.size();
  std::vector<GenerationResult> slots(pairs.size() * np);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto run_one = [&](std::size_t d, std::size_t p) {
    const auto& prov = providers[p];
    GenerationResult& r = slots[d * np + p];
    r.parent = pairs[d].doc_id;
    r.provider = prov.label();
    r.model = prov.model;
    r.doc_id = r.parent + "#" + r.provider;
    r.prompt_hash = prompts[d].hash();
    r.requested_at = utc_now();
    try {
      auto call = generator(prov, prompts[d]);
      r.responded_at = utc_now();
      r.attempts = call.attempts;
      r.raw_text = std::move(call.text);
      auto f = filter_output(r.raw_text, policy);
      r.accepted = f.accepted;
      r.reason = f.reason;
      r.word_count = f.word_count;
      if (f.accepted) r.text = std::move(f.text);
    } catch (const ApiError& e) {
      r.responded_at = utc_now();
      r.attempts = static_cast<std::size_t>(std::max(0, e.attempts()));
      r.reason = RejectReason::ApiError;
      r.error = e.what();
    }
  };

  std::vector<std::jthread> workers;
  std::vector<std::atomic<std::size_t>> next(np);
  for (std::size_t p = 0; p < np; ++p) {
    const auto n = std::min(providers[p].concurrency, pairs.size());
    for (std::size_t w = 0; w < n; ++w) {
      workers.emplace_back([&, p] {
        for (std::size_t d = next[p]++; d < pairs.size(); d = next[p]++) {
          try {
            run_one(d, p);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);

  ParallelCorpus corpus;
  for (const auto& prov : providers) corpus.stats[prov.label()];
  for (std::size_t d = 0; d < pairs.size(); ++d) {
    bool complete = true;
    for (std::size_t p = 0; p < np; ++p) {
      const auto& r = slots[d * np + p];
      auto& s = corpus.stats[r.provider];
      ++s.attempted;
      if (r.accepted) ++s.accepted;
      if (r.reason == RejectReason::Refusal) ++s.refusal;
      if (r.reason == RejectReason::TooShort) ++s.too_short;
      if (r.reason == RejectReason::ApiError) ++s.api_error;
      complete = complete && r.accepted;
    }
    if (complete) corpus.complete_parents.push_back(pairs[d].doc_id);
  }
  std::sort(corpus.complete_parents.begin(), corpus.complete_parents.end());
  corpus.results = std::move(slots);
  std::sort(corpus.results.begin(), corpus.results.end(),
            [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  return corpus;
}

}  // namespace stylo
