#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stylo {

/// One syntactic word of a CoNLL-U sentence.
struct Token {
  int index = 0;  ///< 1-based position within the sentence
  std::string form;
  std::string lemma;  ///< lowercased on ingest
  std::string upos;
  std::string xpos;  ///< empty when the column is "_"
  std::map<std::string, std::string> feats;
  int head = 0;  ///< 0 = root
  std::string deprel;
  std::string deps;  ///< carried through verbatim, "_" when empty
  std::string misc;

  bool is_punct() const noexcept { return upos == "PUNCT"; }

  /// True when feature `key` has `value` among its comma-separated values.
  bool has_feat(std::string_view key, std::string_view value) const;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string text;                   ///< "# text = ..." comment, may be empty
  std::vector<std::string> comments;  ///< other comment lines, without the leading "# "
  /// Multiword-token and empty-node lines, keyed by the number of regular tokens
  /// that precede them. They take no part in counting or matching.
  std::vector<std::pair<std::size_t, std::string>> passthrough;
  /// Set when the heads do not form a single rooted tree.
  bool headless = false;

  std::size_t word_count() const noexcept;
};

struct SourceLabel {
  std::string name;   ///< human_chunk1, human_chunk2 or a model identifier
  std::string genre;  ///< optional register tag

  friend bool operator==(const SourceLabel&, const SourceLabel&) = default;
};

inline constexpr std::string_view kHumanChunk1 = "human_chunk1";
inline constexpr std::string_view kHumanChunk2 = "human_chunk2";

struct AnnotatedDocument {
  std::string doc_id;
  SourceLabel source;
  std::vector<Sentence> sentences;

  /// Tokens whose upos is not PUNCT.
  std::size_t word_count() const noexcept;
  bool headless() const noexcept;
};

std::size_t word_count(const AnnotatedDocument& doc) noexcept;

/// The part of a doc_id before the first '#'. Chunks and generated texts share
/// their parent's id up to that separator ("abc#chunk2", "abc#gpt-4o").
std::string parent_id(std::string_view doc_id);

/// Validates the dependency tree of `sentence` and updates its headless flag.
/// Returns the new flag value.
bool check_tree(Sentence& sentence);

struct ParseOptions {
  /// Prefix for documents that appear before any "# newdoc" comment.
  std::string default_doc_id = "doc";
};

struct DocumentError {
  std::string doc_id;
  std::size_t line = 0;
  std::string message;
};

struct ParseOutcome {
  std::vector<AnnotatedDocument> documents;
  std::vector<DocumentError> errors;
};

/// Parses a CoNLL-U stream. Tokens before any "# newdoc" form a document with
/// a default id; comment lines alone do not. Throws ParseError at the first
/// malformed line.
std::vector<AnnotatedDocument> parse_conllu(std::string_view text, const ParseOptions& options = {});

/// Like parse_conllu, but a malformed document is dropped and reported in
/// `errors` while parsing continues with the next "# newdoc".
ParseOutcome parse_conllu_lenient(std::string_view text, const ParseOptions& options = {});

std::vector<AnnotatedDocument> read_conllu_file(const std::string& path, const ParseOptions& options = {});

/// Serializes documents as CoNLL-U, one "# newdoc id" block per document.
std::string write_conllu(const std::vector<AnnotatedDocument>& docs);

std::string to_lower_ascii(std::string_view s);

}  // namespace stylo
