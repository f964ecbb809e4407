// Acceptance checks. Prints one PASS, FAIL or SKIPPED line per criterion and
// exits nonzero when any check fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "stylo/chunking.hpp"
#include "stylo/error.hpp"
#include "stylo/evaluate.hpp"
#include "stylo/forest.hpp"
#include "stylo/lasso.hpp"
#include "stylo/split.hpp"
#include "stylo/stats.hpp"
#include "stylo/tagger.hpp"
#include "stylo/vocab.hpp"

namespace fs = std::filesystem;
using namespace stylo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, double limit_s, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(limit_s)) + " s limit";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-22s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- feature oracle -----------------------------------------------------

Outcome feature_oracle() {
  const auto catalog = FeatureCatalog::load(fixture::catalog_path());
  const auto gold = nlohmann::json::parse(fixture::read(fixture::path("gold_counts.json")));
  std::size_t checked = 0, wrong = 0;
  std::string first_wrong;
  for (const auto& [file, expected_docs] : gold.items()) {
    for (const auto& doc : read_conllu_file(fixture::path(file))) {
      const auto& expected = expected_docs.at(doc.doc_id);
      const auto fv = tag(doc, catalog);
      for (std::size_t i = 0; i < catalog.size(); ++i) {
        if (catalog[i].kind == FeatureKind::Index) continue;
        const long want = expected.value(catalog[i].id, 0L);
        ++checked;
        if (fv.raw_counts[i] != want) {
          if (wrong++ == 0) {
            first_wrong = doc.doc_id + " " + catalog[i].id + " got " + std::to_string(fv.raw_counts[i]) +
                          " want " + std::to_string(want);
          }
        }
      }
    }
  }
  // Two hand-checked example sentences.
  const auto examples = read_conllu_file(fixture::path("worked_examples.conllu"));
  long participles = -1, nominalizations = -1;
  for (const auto& doc : examples) {
    const auto fv = tag(doc, catalog);
    if (doc.doc_id == "bryan") participles = fv.raw_counts[*catalog.index_of("f_25")];
    if (doc.doc_id == "schemes") nominalizations = fv.raw_counts[*catalog.index_of("f_14")];
  }
  const bool ok = wrong == 0 && participles == 2 && nominalizations == 4;
  std::string detail = std::to_string(checked) + " counts, " + std::to_string(wrong) + " wrong; participial clauses " +
                       std::to_string(participles) + "/2, nominalizations " + std::to_string(nominalizations) + "/4";
  if (wrong) detail += "; first: " + first_wrong;
  return {ok, detail};
}

// --- Wilcoxon -----------------------------------------------------------

Outcome wilcoxon_oracle() {
  Rng rng(12345);
  double worst_exact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<double> d(n);
    // Half the instances use coarse values so ties and zeros occur.
    for (auto& v : d) v = trial % 2 ? std::round(rng.normal() * 3) : rng.normal();
    const auto r = wilcoxon_signed_rank_diffs(d, WilcoxonMethod::Exact);
    worst_exact = std::max(worst_exact, std::fabs(r.p - oracle::wilcoxon_enumeration_p(d)));
  }
  double worst_normal = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> d(20);
    for (auto& v : d) v = rng.normal() + 0.4 * rng.uniform();
    const auto r = wilcoxon_signed_rank_diffs(d, WilcoxonMethod::Normal);
    worst_normal = std::max(worst_normal, std::fabs(r.p - oracle::wilcoxon_enumeration_p(d)));
  }
  return {worst_exact <= 1e-12 && worst_normal <= 0.01,
          "exact max |dp| " + fmt("%.3g", worst_exact) + " over 1000 (<= 1e-12); normal at n=20 max |dp| " +
              fmt("%.4f", worst_normal) + " (<= 0.01)"};
}

// --- statistics identities ----------------------------------------------

Outcome stats_identities() {
  const bool bonf = bonferroni(0.0005, 66) == 0.033;
  Rng rng(99);
  bool shift_ok = true, scale_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pairs;
    const std::size_t n = 2 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      // Values on a dyadic grid keep every shift and power-of-two scale exact.
      pairs.emplace_back(std::ldexp(static_cast<double>(rng.below(4096)), -6),
                         std::ldexp(static_cast<double>(rng.below(4096) + 256), -6));
    }
    double d;
    try {
      d = cohen_d_paired(pairs);
    } catch (const ZeroVarianceError&) {
      continue;
    }
    auto shifted = pairs, scaled = pairs;
    const double shift = std::ldexp(static_cast<double>(rng.below(1024)), -4);
    const double scale = std::ldexp(1.0, static_cast<int>(rng.below(11)) - 5);
    for (auto& [a, b] : shifted) a += shift, b += shift;
    for (auto& [a, b] : scaled) a *= scale, b *= scale;
    shift_ok = shift_ok && cohen_d_paired(shifted) == d;
    scale_ok = scale_ok && cohen_d_paired(scaled) == d;
  }
  const std::vector<double> zeros(10, 0.0);
  const auto z = wilcoxon_signed_rank_diffs(zeros);
  const bool zero_ok = z.all_zero && z.p == 1.0 && z.n == 0;
  return {bonf && shift_ok && scale_ok && zero_ok,
          std::string("bonferroni(0.0005, 66) == 0.033: ") + (bonf ? "yes" : "no") + "; d shift-invariant: " +
              (shift_ok ? "yes" : "no") + "; d scale-invariant: " + (scale_ok ? "yes" : "no") +
              "; all-zero p = 1: " + (zero_ok ? "yes" : "no")};
}

// --- classifiers --------------------------------------------------------

double test_accuracy(const FeatureMatrix& m, const ForestParams& params, ImportanceRanking* imp) {
  DatasetSplit spec;
  spec.seed = 5;
  const auto parts = split(m, spec);
  const auto model = ForestModel::train(parts.train, params);
  if (imp) *imp = model.gini_importance();
  return evaluate(model, parts.test).confusion.accuracy();
}

Outcome classifier_sanity() {
  constexpr std::size_t kInformative = 17;  // f_18
  ForestParams params;  // 500 trees, 8 features per split
  params.seed = 3;
  ImportanceRanking imp;
  const double separated = test_accuracy(synth::separated_matrix(2000, kInformative, 5.0, 1), params, &imp);
  const double permuted = test_accuracy(synth::separated_matrix(2000, kInformative, 5.0, 2, true), params, nullptr);
  const bool ranked = !imp.empty() && imp[0].first == "f_18";

  // Lasso on the same kind of data, checked against the proximal-gradient oracle.
  const auto m = synth::separated_matrix(400, kInformative, 1.0, 4);
  LogisticProblem prob;
  for (const auto& r : m.rows()) {
    prob.x.push_back(r.values);
    prob.y.push_back(r.source == "llm" ? 1.0 : 0.0);
  }
  const double top = lambda_max(prob);
  const auto at_max = fit_lasso(prob, top);
  const bool zeros = std::all_of(at_max.beta.begin(), at_max.beta.end(), [](double b) { return b == 0.0; });
  double worst = std::fabs(at_max.objective - oracle::fista_lasso(prob, top).objective);
  for (double frac : {0.5, 0.1, 0.02}) {
    const auto mine = fit_lasso(prob, top * frac, {100000, 1e-12});
    worst = std::max(worst, std::fabs(mine.objective - oracle::fista_lasso(prob, top * frac).objective));
  }
  const bool ok = separated >= 0.99 && std::fabs(permuted - 0.5) <= 0.05 && ranked && zeros && worst <= 1e-6;
  return {ok, "separated " + fmt("%.4f", separated) + " (>= 0.99); permuted " + fmt("%.4f", permuted) +
                  " (0.50 +- 0.05); top feature " + (imp.empty() ? std::string("none") : imp[0].first) +
                  "; lasso zeros at lambda_max: " + (zeros ? "yes" : "no") + "; max objective gap " +
                  fmt("%.2g", worst) + " (<= 1e-6)"};
}

// --- chunker ------------------------------------------------------------

Outcome chunker_contract() {
  Rng rng(2024);
  constexpr std::size_t kTarget = 120;
  std::size_t checked = 0, bad = 0;
  for (int i = 0; i < 200; ++i) {
    const auto doc = synth::document(rng, "doc" + std::to_string(i), 30 + rng.below(40), 1, 30);
    std::size_t longest = 0;
    for (const auto& s : doc.sentences) longest = std::max(longest, s.word_count());
    try {
      const auto p = split_chunks(doc, kTarget);
      const auto w1 = oracle::words(p.chunk1), w2 = oracle::words(p.chunk2);
      const bool ok = p.chunk1_first == 0 && p.chunk1_last + 1 == p.chunk2_first && p.chunk2_first <= p.chunk2_last &&
                      p.chunk2_last < doc.sentences.size() && w1 >= kTarget && w1 < kTarget + longest &&
                      w2 >= kTarget && w2 < kTarget + longest && w1 + w2 <= oracle::words(doc);
      ++checked;
      bad += !ok;
    } catch (const TooShortError&) {
      ++bad;
    }
  }
  return {bad == 0 && checked == 200,
          std::to_string(checked) + " of 200 documents chunked, " + std::to_string(bad) + " violations"};
}

// --- CLI determinism ----------------------------------------------------

int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "stylo_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root / "corpus");
  std::ofstream(root / "corpus/corpus.conllu") << write_conllu(synth::parallel_documents(40, {"gpt"}, 8));
  const std::string cli = std::string("'") + STYLO_CLI_PATH + "'";
  for (const char* out : {"run1", "run2"}) {
    const std::string dir = "'" + (root / out).string() + "'";
    if (run(cli + " --seed 11 --out-dir " + dir + " tag '" + (root / "corpus").string() + "'") != 0 ||
        run(cli + " --seed 11 --out-dir " + dir + " compare " + dir + "/features.csv") != 0 ||
        run(cli + " --seed 11 --out-dir " + dir + " classify --trees 100 " + dir + "/features.csv") != 0) {
      return {false, std::string("command failed in ") + out};
    }
  }
  std::size_t same = 0, total = 0;
  std::string differing;
  for (const auto& entry : fs::directory_iterator(root / "run1")) {
    ++total;
    const auto name = entry.path().filename().string();
    if (fixture::read(entry.path().string()) == fixture::read((root / "run2" / name).string())) {
      ++same;
    } else {
      differing += " " + name;
    }
  }
  fs::remove_all(root);
  return {same == total && total >= 8, std::to_string(same) + " of " + std::to_string(total) +
                                           " tag/compare/classify outputs byte-identical" + differing};
}

// --- vocabulary ---------------------------------------------------------

AnnotatedDocument filler_document(const std::string& id, std::size_t words, std::size_t planted, std::size_t seed) {
  AnnotatedDocument d;
  d.doc_id = id;
  Sentence s;
  for (std::size_t i = 0; i < words; ++i) {
    Token t;
    t.index = static_cast<int>(s.tokens.size() + 1);
    t.form = t.lemma = i < planted ? "camaraderie" : "filler" + std::to_string((i * 7 + seed) % 500);
    t.upos = "NOUN";
    s.tokens.push_back(std::move(t));
    if (s.tokens.size() == 20) {
      d.sentences.push_back(std::move(s));
      s = {};
    }
  }
  if (!s.tokens.empty()) d.sentences.push_back(std::move(s));
  return d;
}

Outcome vocabulary_pipeline() {
  // 100,000 words on each side. Human: one occurrence. LLM: 162 occurrences
  // spread over 23 of 100 documents.
  std::vector<AnnotatedDocument> human, llm;
  for (std::size_t i = 0; i < 100; ++i) human.push_back(filler_document("h" + std::to_string(i), 1000, i == 0, i));
  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t planted = i < 23 ? (i < 1 ? 8 : 7) : 0;  // 8 + 22 * 7 = 162
    llm.push_back(filler_document("l" + std::to_string(i), 1000, planted, i));
  }
  const auto rows = compare_vocab(word_rates(human), word_rates(llm));
  const auto it = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.lemma == "camaraderie"; });
  if (it == rows.end()) return {false, "planted lemma missing from the comparison"};
  const bool ok = std::fabs(it->ratio - 162.0) <= 1e-9 && it->llm_doc_fraction == 0.23 && rows.front().lemma == it->lemma;
  return {ok, "ratio " + fmt("%.12g", it->ratio) + " (162 +- 1e-9); doc_fraction " + fmt("%.17g", it->llm_doc_fraction) +
                  " (0.23); ranked first: " + (rows.front().lemma == it->lemma ? "yes" : "no")};
}

}  // namespace

int main() {
  report("feature_oracle", 5, feature_oracle);
  report("wilcoxon_oracle", 30, wilcoxon_oracle);
  report("statistics_identities", 0, stats_identities);
  report("classifier_sanity", 120, classifier_sanity);
  report("chunker_contract", 0, chunker_contract);
  report("cli_determinism", 0, cli_determinism);
  std::printf("SKIPPED  %-22s             needs the released parallel corpus, re-parsed to CoNLL-U\n",
              "full_corpus_replication");
  report("vocabulary_pipeline", 0, vocabulary_pipeline);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
