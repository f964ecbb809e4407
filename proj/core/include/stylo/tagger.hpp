#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stylo/catalog.hpp"
#include "stylo/conllu.hpp"

namespace stylo {

inline constexpr std::size_t kBiberFeatureCount = 66;
inline constexpr std::size_t kTypeTokenWindow = 400;

/// Feature values for one document, in catalog order. Count-rate features are
/// occurrences per 1,000 words; index features use native units. A feature that
/// could not be computed (syntactic rule on a document with a malformed tree)
/// holds NaN and a raw count of -1.
struct FeatureVector {
  std::string doc_id;
  SourceLabel source;
  std::size_t word_count = 0;
  std::vector<double> values;
  std::vector<long> raw_counts;  ///< -1 for index features and missing values
  bool short_ttr = false;        ///< fewer than 400 words in the TTR window
  bool headless = false;
};

/// Evidence for one match: tokens [first_token, last_token] (1-based) of
/// sentence `sentence` (0-based).
struct MatchSpan {
  std::string feature_id;
  std::size_t sentence = 0;
  int first_token = 0;
  int last_token = 0;
};

struct TaggedDocument {
  FeatureVector features;
  std::vector<MatchSpan> evidence;
};

/// A match of one rule within a sentence: tokens [start, start + length), 0-based.
struct RuleMatch {
  std::size_t start = 0;
  std::size_t length = 0;
};

/// Non-overlapping leftmost-longest matches of `rule` in `sentence`.
std::vector<RuleMatch> match_rule(const Rule& rule, const Sentence& sentence);

/// Evaluates a predicate on token `i` (0-based) of `sentence`.
bool evaluate(const TokenPredicate& predicate, const Sentence& sentence, std::size_t i);

/// Throws EmptyDocumentError when the document has no words.
FeatureVector tag(const AnnotatedDocument& doc, const FeatureCatalog& catalog);
TaggedDocument tag_with_evidence(const AnnotatedDocument& doc, const FeatureCatalog& catalog);

double mean_word_length(const AnnotatedDocument& doc);

/// Distinct lowercased surface forms over the first 400 words. `is_short`
/// reports that the document had fewer words than the window.
double type_token_ratio(const AnnotatedDocument& doc, bool* is_short = nullptr);

/// Surface length in Unicode code points.
std::size_t utf8_length(const std::string& s) noexcept;

}  // namespace stylo
