#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace stylo {

/// Conditions on a single token. Every populated field must hold; empty lists
/// are unconstrained. String lists match exactly (lemma and form are compared
/// lowercased).
struct TokenPredicate {
  std::vector<std::string> upos;
  std::vector<std::string> xpos;
  std::vector<std::string> lemma;
  std::vector<std::string> form;
  std::vector<std::string> lemma_suffix;
  std::vector<std::string> deprel;
  std::vector<std::string> deprel_not;
  std::map<std::string, std::vector<std::string>> feats;
  std::optional<std::size_t> min_length;  ///< surface length in code points
  std::optional<bool> sentence_initial;   ///< first non-punctuation token
  std::optional<bool> in_question;        ///< sentence ends with "?"
  std::optional<bool> upos_matches_head;
  std::vector<TokenPredicate> head;      ///< at most one: governor must satisfy it
  std::vector<TokenPredicate> has_child;  ///< each needs some matching dependent
  std::vector<TokenPredicate> no_child;   ///< no dependent may match any of these
  std::vector<TokenPredicate> any_of;     ///< at least one must hold
  std::vector<TokenPredicate> none_of;    ///< none may hold

  /// True when evaluation looks at the dependency tree.
  bool uses_syntax() const;
};

/// One position of a sequence pattern, repeated between min and max times.
struct SequenceElement {
  TokenPredicate predicate;
  std::size_t min = 1;
  std::size_t max = 1;
};

enum class RuleKind { Token, Sequence, Phrases, Union };

struct Rule {
  RuleKind kind = RuleKind::Token;
  TokenPredicate match;                    ///< Token
  std::vector<SequenceElement> sequence;   ///< Sequence
  std::vector<std::vector<std::string>> phrases;  ///< Phrases, longest first
  bool phrases_on_lemma = false;
  std::vector<TokenPredicate> first;  ///< Phrases: optional constraint on the first token
  std::vector<Rule> rules;            ///< Union

  bool uses_syntax() const;
};

enum class FeatureKind { CountRate, Index };
enum class IndexKind { None, TypeTokenRatio, MeanWordLength };

struct FeatureDef {
  std::string id;  ///< f_01 .. f_66
  std::string short_name;
  std::string category;
  FeatureKind kind = FeatureKind::CountRate;
  IndexKind index = IndexKind::None;
  Rule rule;
  bool syntactic = false;  ///< derived: rule inspects heads or relations
};

/// Immutable, ordered set of feature definitions loaded from a JSON catalog.
class FeatureCatalog {
 public:
  /// Loads a catalog file. Lexicon references ("@name") resolve to
  /// `<catalog dir>/<lexicon_dir>/<name>.txt`.
  static FeatureCatalog load(const std::string& path);

  /// Builds a catalog from parsed JSON; `lexicons` supplies the "@name" lists.
  static FeatureCatalog from_json(const nlohmann::json& j,
                                  const std::map<std::string, std::vector<std::string>>& lexicons);

  const std::vector<FeatureDef>& features() const noexcept { return features_; }
  std::size_t size() const noexcept { return features_.size(); }
  const FeatureDef& operator[](std::size_t i) const { return features_[i]; }

  std::optional<std::size_t> index_of(const std::string& id_or_name) const;
  std::vector<std::string> ids() const;

  /// SHA-256 over the catalog file and every lexicon it loaded.
  const std::string& content_hash() const noexcept { return hash_; }

 private:
  std::vector<FeatureDef> features_;
  std::string hash_;
};

/// Reads a lexicon file: one entry per line, '#' comments, blank lines ignored.
std::vector<std::string> read_lexicon(const std::string& path);

}  // namespace stylo
