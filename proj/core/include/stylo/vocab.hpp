#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "stylo/conllu.hpp"

namespace stylo {

struct LemmaRate {
  std::size_t count = 0;
  std::size_t documents = 0;  ///< documents containing the lemma
  double rate = 0;            ///< per 1,000 words of the whole corpus
  double doc_fraction = 0;
};

/// Lemma frequencies over a corpus treated as one concatenated text.
struct VocabularyTable {
  std::size_t total_words = 0;
  std::size_t documents = 0;
  std::map<std::string, LemmaRate> lemmas;
};

/// Punctuation is excluded. Throws std::invalid_argument for an empty corpus.
VocabularyTable word_rates(const std::vector<AnnotatedDocument>& docs);

struct WordComparisonRow {
  std::string lemma;
  double human_rate = 0;  ///< per 1,000 words
  double llm_rate = 0;
  double ratio = 0;       ///< llm_rate / human_rate
  double llm_doc_fraction = 0;
};

/// One occurrence per million words, expressed per 1,000 words.
inline constexpr double kDefaultMinHumanRate = 0.001;

/// Rows for lemmas with human_rate > min_human_rate, sorted by descending
/// ratio (ties by lemma). Lemmas absent from the LLM corpus get ratio 0.
std::vector<WordComparisonRow> compare_vocab(const VocabularyTable& human, const VocabularyTable& llm,
                                             double min_human_rate = kDefaultMinHumanRate);

/// The k most overrepresented rows (front of the sorted list).
std::vector<WordComparisonRow> top_overrepresented(const std::vector<WordComparisonRow>& rows, std::size_t k);
/// The k most underrepresented rows, lowest ratio first.
std::vector<WordComparisonRow> top_underrepresented(const std::vector<WordComparisonRow>& rows, std::size_t k);

std::string vocab_csv(const std::vector<WordComparisonRow>& rows);

}  // namespace stylo
