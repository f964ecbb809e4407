#include "stylo/vocab.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "stylo/csv.hpp"

namespace stylo {

VocabularyTable word_rates(const std::vector<AnnotatedDocument>& docs) {
  if (docs.empty()) throw std::invalid_argument("word_rates needs a nonempty corpus");
  VocabularyTable table;
  table.documents = docs.size();
  for (const auto& doc : docs) {
    std::set<std::string> seen;
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        if (t.is_punct()) continue;
        ++table.total_words;
        ++table.lemmas[t.lemma].count;
        seen.insert(t.lemma);
      }
    }
    for (const auto& l : seen) ++table.lemmas[l].documents;
  }
  for (auto& [_, r] : table.lemmas) {
    r.rate = static_cast<double>(r.count) / static_cast<double>(table.total_words) * 1000.0;
    r.doc_fraction = static_cast<double>(r.documents) / static_cast<double>(table.documents);
  }
  return table;
}

std::vector<WordComparisonRow> compare_vocab(const VocabularyTable& human, const VocabularyTable& llm,
                                             double min_human_rate) {
  std::vector<WordComparisonRow> rows;
  for (const auto& [lemma, h] : human.lemmas) {
    if (!(h.rate > min_human_rate)) continue;
    WordComparisonRow row;
    row.lemma = lemma;
    row.human_rate = h.rate;
    if (auto it = llm.lemmas.find(lemma); it != llm.lemmas.end()) {
      row.llm_rate = it->second.rate;
      row.llm_doc_fraction = it->second.doc_fraction;
    }
    row.ratio = row.llm_rate / row.human_rate;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    return a.lemma < b.lemma;
  });
  return rows;
}

std::vector<WordComparisonRow> top_overrepresented(const std::vector<WordComparisonRow>& rows, std::size_t k) {
  return {rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(std::min(k, rows.size()))};
}

std::vector<WordComparisonRow> top_underrepresented(const std::vector<WordComparisonRow>& rows, std::size_t k) {
  std::vector<WordComparisonRow> out(rows.rbegin(), rows.rbegin() + static_cast<std::ptrdiff_t>(std::min(k, rows.size())));
  return out;
}

std::string vocab_csv(const std::vector<WordComparisonRow>& rows) {
  std::string out = "lemma,human_rate,llm_rate,ratio,llm_doc_fraction\n";
  for (const auto& r : rows) {
    out += csv::join({r.lemma, csv::format_number(r.human_rate), csv::format_number(r.llm_rate),
                      csv::format_number(r.ratio), csv::format_number(r.llm_doc_fraction)}) +
           "\n";
  }
  return out;
}

}  // namespace stylo
