#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "stylo/conllu.hpp"

namespace stylo {

/// System and user message templates. The user text holds one {chunk1} and
/// one {word_target} slot.
struct PromptTemplate {
  std::string system_text =
      "You are a skilled writer. Continue texts seamlessly, matching their style, tone, and diction.";
  std::string user_text =
      "Here is the beginning of a text:\n\n{chunk1}\n\nContinue this text for about {word_target} more words in "
      "the same style, tone, and diction. Reply with the continuation only.";
  std::size_t word_target = 500;

  /// Throws Error unless each slot occurs exactly once in user_text.
  void validate() const;

  /// Reads {"system", "user", "word_target"}; absent keys keep the defaults.
  static PromptTemplate from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Prompt {
  std::string system;
  std::string user;

  /// SHA-256 hex of system + '\x1f' + user.
  std::string hash() const;
};

/// Surface text of a document: each sentence's "# text" when present, else its
/// forms joined with single spaces (no space where MISC has SpaceAfter=No).
/// Sentences are separated by one space.
std::string surface_text(const AnnotatedDocument& doc);

/// Throws Error for an empty chunk or an invalid template.
Prompt build_prompt(std::string_view chunk1, const PromptTemplate& tmpl);
Prompt build_prompt(const AnnotatedDocument& chunk1, const PromptTemplate& tmpl);

}  // namespace stylo
