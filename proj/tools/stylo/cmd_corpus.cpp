#include <iostream>
#include <map>
#include <set>

#include "context.hpp"
#include "stylo/chunking.hpp"
#include "stylo/error.hpp"
#include "stylo/manifest.hpp"
#include "stylo/vocab.hpp"

namespace stylo::cli {

namespace {

void report_errors(const std::vector<DocumentError>& errors) {
  for (const auto& e : errors) {
    std::cerr << "error: " << (e.doc_id.empty() ? "<unknown>" : e.doc_id);
    if (e.line) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.message << '\n';
  }
}

struct ChunkArgs {
  std::vector<std::string> inputs;
  std::size_t target_words = 500;
};

void run_chunk(Context& ctx, const ChunkArgs& args) {
  const auto files = collect_conllu(args.inputs);
  auto corpus = load_corpus(files);
  if (!corpus.errors.empty()) {
    report_errors(corpus.errors);
    throw CliError(kDataError, std::to_string(corpus.errors.size()) + " document(s) failed to parse");
  }
  if (corpus.documents.empty()) throw CliError(kNoInput, "no documents in input");

  std::vector<AnnotatedDocument> first, second;
  CorpusManifest manifest;
  nlohmann::json too_short = nlohmann::json::array();
  nlohmann::json spans = nlohmann::json::object();
  for (const auto& doc : corpus.documents) {
    try {
      auto pair = split_chunks(doc, args.target_words);
      manifest.documents[pair.chunk1.doc_id] = {pair.chunk1.source.name, doc.source.genre, "chunk1.conllu"};
      manifest.documents[pair.chunk2.doc_id] = {pair.chunk2.source.name, doc.source.genre, "chunk2.conllu"};
      spans[pair.doc_id] = {{"chunk1", {pair.chunk1_first, pair.chunk1_last}},
                            {"chunk2", {pair.chunk2_first, pair.chunk2_last}}};
      first.push_back(std::move(pair.chunk1));
      second.push_back(std::move(pair.chunk2));
    } catch (const TooShortError& e) {
      std::cout << "too short: " << doc.doc_id << " (" << e.word_count() << " words, need " << e.required()
                << ")\n";
      too_short.push_back({{"doc_id", doc.doc_id}, {"words", e.word_count()}, {"required", e.required()}});
    }
  }
  manifest.metadata = ctx.metadata("chunk");
  manifest.extra = {{"target_words", args.target_words},
                    {"chunked", first.size()},
                    {"too_short", std::move(too_short)},
                    {"sentence_spans", std::move(spans)}};
  write_file(ctx.out("chunk1.conllu"), write_conllu(first));
  write_file(ctx.out("chunk2.conllu"), write_conllu(second));
  manifest.save(ctx.out("chunks.json").string());
  std::cout << "chunked " << first.size() << " document(s); " << corpus.documents.size() - first.size()
            << " too short\n";
}

struct TagArgs {
  std::vector<std::string> inputs;
  std::string source;
  std::string output = "features.csv";
  unsigned threads = 0;
  bool partial_catalog = false;
};

void run_tag(Context& ctx, const TagArgs& args) {
  const auto files = collect_conllu(args.inputs);
  const auto& catalog = ctx.catalog(!args.partial_catalog);
  auto corpus = load_corpus(files);
  std::vector<AnnotatedDocument> docs;
  for (auto& d : corpus.documents) {
    if (d.source.name.empty()) {
      if (args.source.empty()) {
        corpus.errors.push_back({d.doc_id, 0, "document has no source label (add '# source =' or pass --source)"});
        continue;
      }
      d.source.name = args.source;
    }
    docs.push_back(std::move(d));
  }
  if (docs.empty() && corpus.errors.empty()) throw CliError(kNoInput, "no documents in input");

  auto result = tag_corpus(docs, catalog, args.threads);
  auto errors = corpus.errors;
  errors.insert(errors.end(), result.errors.begin(), result.errors.end());
  result.matrix.metadata() = ctx.metadata_pairs("tag");
  const auto out = ctx.out(args.output);
  result.matrix.save(out.string());
  auto sidecar = out;
  sidecar.replace_extension(".errors.csv");
  write_file(sidecar, errors_to_csv(errors));

  std::size_t headless = 0;
  for (const auto& d : docs) headless += d.headless() ? 1 : 0;
  std::cout << "tagged " << result.matrix.size() << " document(s) with " << catalog.size() << " features\n";
  if (headless) std::cerr << "warning: " << headless << " document(s) without a usable parse tree; syntactic features are NA\n";
  if (!errors.empty()) {
    std::cerr << "warning: " << errors.size() << " document(s) failed; see " << sidecar.string() << '\n';
  }
}

struct VocabArgs {
  std::vector<std::string> inputs;
  std::string human = std::string(kHumanChunk2);
  std::string llm;
  double min_rate = kDefaultMinHumanRate;
  std::size_t top = 0;
  std::string output = "vocab.csv";
};

void run_vocab(Context& ctx, const VocabArgs& args) {
  const auto files = collect_conllu(args.inputs);
  auto corpus = load_corpus(files);
  report_errors(corpus.errors);
  std::set<std::string> labels;
  for (const auto& d : corpus.documents) labels.insert(d.source.name);
  std::string llm = args.llm;
  if (llm.empty()) {
    labels.erase(args.human);
    if (labels.size() != 1) throw CliError(kDataError, "cannot infer the LLM source; pass --llm");
    llm = *labels.begin();
  }
  std::vector<AnnotatedDocument> human_docs, llm_docs;
  for (auto& d : corpus.documents) {
    if (d.source.name == args.human) human_docs.push_back(std::move(d));
    else if (d.source.name == llm) llm_docs.push_back(std::move(d));
  }
  if (human_docs.empty()) throw CliError(kDataError, "no documents with source " + args.human);
  if (llm_docs.empty()) throw CliError(kDataError, "no documents with source " + llm);

  const auto rows = compare_vocab(word_rates(human_docs), word_rates(llm_docs), args.min_rate);
  const auto kept = args.top ? top_overrepresented(rows, args.top) : rows;
  auto meta = ctx.metadata_pairs("vocab");
  meta.emplace_back("human", args.human);
  meta.emplace_back("llm", llm);
  write_file(ctx.out(args.output), with_metadata(meta, vocab_csv(kept)));
  std::cout << "most overrepresented in " << llm << ":\n";
  for (const auto& r : top_overrepresented(rows, 10)) std::cout << "  " << r.lemma << "  x" << r.ratio << '\n';
}

}  // namespace

void add_chunk_command(CLI::App& app, Context& ctx) {
  auto args = std::make_shared<ChunkArgs>();
  auto* cmd = app.add_subcommand("chunk", "Split documents into two consecutive sentence-aligned chunks");
  cmd->add_option("inputs", args->inputs, "CoNLL-U files or directories")->required();
  cmd->add_option("--target-words", args->target_words, "Minimum words per chunk")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->callback([&ctx, args] { run_chunk(ctx, *args); });
}

void add_tag_command(CLI::App& app, Context& ctx) {
  auto args = std::make_shared<TagArgs>();
  auto* cmd = app.add_subcommand("tag", "Extract catalog features into a feature-matrix CSV");
  cmd->add_option("inputs", args->inputs, "CoNLL-U files or directories")->required();
  cmd->add_option("--source", args->source, "Source label for documents without a '# source' comment");
  cmd->add_option("--output", args->output, "Output file name inside --out-dir")->capture_default_str();
  cmd->add_option("--threads", args->threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_flag("--partial-catalog", args->partial_catalog, "Allow a catalog with other than 66 features");
  cmd->callback([&ctx, args] { run_tag(ctx, *args); });
}

void add_vocab_command(CLI::App& app, Context& ctx) {
  auto args = std::make_shared<VocabArgs>();
  auto* cmd = app.add_subcommand("vocab", "Compare lemma rates between human and LLM documents");
  cmd->add_option("inputs", args->inputs, "CoNLL-U files or directories")->required();
  cmd->add_option("--human", args->human, "Human source label")->capture_default_str();
  cmd->add_option("--llm", args->llm, "LLM source label (inferred when only one other source exists)");
  cmd->add_option("--min-rate", args->min_rate, "Keep lemmas whose human rate per 1,000 words exceeds this")
      ->capture_default_str();
  cmd->add_option("--top", args->top, "Write only the top N overrepresented lemmas (0 = all)")
      ->capture_default_str();
  cmd->add_option("--output", args->output, "Output file name inside --out-dir")->capture_default_str();
  cmd->callback([&ctx, args] { run_vocab(ctx, *args); });
}

}  // namespace stylo::cli
