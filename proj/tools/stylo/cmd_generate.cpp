#include <algorithm>
#include <cstdlib>
#include <map>
#include <iostream>

#include "context.hpp"
#include "stylo/error.hpp"
#include "stylo/manifest.hpp"
#include "stylo/parallel_corpus.hpp"

namespace stylo::cli {

namespace {

namespace fs = std::filesystem;

struct GenerateArgs {
  std::string chunks;
  std::string providers;
  std::string template_file;
  std::size_t min_words = 0;  // 0 = config or default
  bool keep_preamble = false;
  bool dry_run = false;
  std::size_t limit = 0;
};

nlohmann::json load_json_file(const std::string& path) {
  check_exists(path);
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CliError(kDataError, path + " is not valid JSON: " + e.what());
  }
}

std::vector<ProviderConfig> load_providers(const Context& ctx, const GenerateArgs& args) {
  nlohmann::json list;
  if (!args.providers.empty()) {
    list = load_json_file(args.providers);
    if (list.is_object()) list = list.value("providers", nlohmann::json::array());
  } else {
    list = ctx.section("generate").value("providers", nlohmann::json::array());
  }
  if (!list.is_array() || list.empty()) {
    throw CliError(kDataError, "no providers configured (use --providers or generate.providers in --config)");
  }
  std::vector<ProviderConfig> out;
  for (const auto& p : list) out.push_back(ProviderConfig::from_json(p));
  return out;
}

// chunk1 documents listed in a manifest written by the chunk command.
std::vector<ChunkPair> load_chunk1(const std::string& manifest_path, std::size_t limit) {
  check_exists(manifest_path);
  const auto manifest = CorpusManifest::load(manifest_path);
  const auto base = fs::path(manifest_path).parent_path();
  std::map<std::string, std::vector<AnnotatedDocument>> files;
  std::vector<ChunkPair> pairs;
  for (const auto& [doc_id, entry] : manifest.documents) {
    if (entry.source != kHumanChunk1) continue;
    auto it = files.find(entry.path);
    if (it == files.end()) {
      const auto path = base / entry.path;
      check_exists(path.string());
      it = files.emplace(entry.path, parse_conllu(read_file(path))).first;
    }
    const auto found = std::find_if(it->second.begin(), it->second.end(),
                                    [&](const AnnotatedDocument& d) { return d.doc_id == doc_id; });
    if (found == it->second.end()) throw CliError(kDataError, doc_id + " not found in " + entry.path);
    ChunkPair pair;
    pair.doc_id = parent_id(doc_id);
    pair.chunk1 = *found;
    pairs.push_back(std::move(pair));
    if (limit && pairs.size() == limit) break;
  }
  if (pairs.empty()) throw CliError(kNoInput, "manifest lists no " + std::string(kHumanChunk1) + " documents");
  return pairs;
}

void run_generate(Context& ctx, const GenerateArgs& args) {
  const auto section = ctx.section("generate");
  PromptTemplate tmpl;
  if (!args.template_file.empty()) {
    tmpl = PromptTemplate::from_json(load_json_file(args.template_file));
  } else if (section.contains("template")) {
    tmpl = PromptTemplate::from_json(section["template"]);
  }
  tmpl.validate();
  FilterPolicy policy;
  if (section.contains("filter")) {
    const auto& f = section["filter"];
    policy.min_words = f.value("min_words", policy.min_words);
    policy.refusal_phrases = f.value("refusal_phrases", policy.refusal_phrases);
    policy.strip_preamble = f.value("strip_preamble", policy.strip_preamble);
  }
  if (args.min_words) policy.min_words = args.min_words;
  if (args.keep_preamble) policy.strip_preamble = false;
  policy.validate();

  const auto pairs = load_chunk1(args.chunks, args.limit);

  if (args.dry_run) {
    for (const auto& pair : pairs) {
      const auto prompt = build_prompt(pair.chunk1, tmpl);
      std::cout << "=== " << pair.doc_id << " prompt " << prompt.hash() << "\n[system]\n"
                << prompt.system << "\n[user]\n" << prompt.user << "\n\n";
    }
    std::cerr << pairs.size() << " prompt(s); dry run, no requests sent\n";
    return;
  }

  const auto providers = load_providers(ctx, args);
  for (const auto& p : providers) {
    const char* key = std::getenv(p.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ApiError("missing credential for provider " + p.label() + ": set the " + p.api_key_env +
                     " environment variable");
    }
  }
  const auto corpus = assemble_parallel_corpus(pairs, providers, tmpl, policy);
  auto meta = ctx.metadata("generate");
  meta["template"] = tmpl.to_json();
  meta["filter"] = {{"min_words", policy.min_words},
                    {"refusal_phrases", policy.refusal_phrases},
                    {"strip_preamble", policy.strip_preamble}};
  nlohmann::json provs = nlohmann::json::array();
  for (const auto& p : providers) provs.push_back(p.to_json());
  meta["providers"] = std::move(provs);
  corpus.write(ctx.options.out_dir, meta);

  for (const auto& [name, s] : corpus.stats) {
    std::cout << name << ": " << s.accepted << "/" << s.attempted << " accepted (" << s.refusal << " refusals, "
              << s.too_short << " too short, " << s.api_error << " API errors)\n";
  }
  std::cout << corpus.complete_parents.size() << " of " << pairs.size()
            << " document(s) complete across all providers\n";
}

}  // namespace

void add_generate_command(CLI::App& app, Context& ctx) {
  auto args = std::make_shared<GenerateArgs>();
  auto* cmd = app.add_subcommand("generate", "Prompt LLM endpoints with chunk 1 texts to build a parallel corpus");
  cmd->add_option("chunks", args->chunks, "chunks.json written by the chunk command")->required();
  cmd->add_option("--providers", args->providers, "JSON list of provider configs");
  cmd->add_option("--template", args->template_file, "JSON prompt template {system, user, word_target}");
  cmd->add_option("--min-words", args->min_words, "Reject outputs shorter than this (default 100)");
  cmd->add_flag("--keep-preamble", args->keep_preamble, "Do not strip continuation boilerplate");
  cmd->add_flag("--dry-run", args->dry_run, "Print the prompts and exit without sending requests");
  cmd->add_option("--limit", args->limit, "Use only the first N documents (0 = all)");
  cmd->callback([&ctx, args] { run_generate(ctx, *args); });
}

}  // namespace stylo::cli
