#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace stylo {

struct FilterPolicy {
  std::size_t min_words = 100;
  std::vector<std::string> refusal_phrases = {
      "I can't", "I cannot", "I'm sorry, but", "I am sorry, but", "as an AI", "I'm unable to", "I am unable to",
      "I won't be able to", "I'm not able to"};
  bool strip_preamble = true;

  void validate() const;  ///< throws Error when min_words is 0
};

inline constexpr std::size_t kRefusalWindow = 200;  ///< code points

enum class RejectReason { None, Refusal, TooShort, ApiError };

std::string_view to_string(RejectReason r);

struct FilterOutcome {
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  std::string text;  ///< trimmed, preamble removed
  std::size_t word_count = 0;
};

/// Whitespace-delimited word count.
std::size_t count_words(std::string_view text);

/// Removes leading continuation boilerplate ("Here is the continuation of the
/// text:") until none is left, then trims surrounding whitespace.
std::string strip_preamble(std::string_view text);

/// Refusal phrases are matched case-insensitively within the first
/// kRefusalWindow code points, with typographic apostrophes read as "'".
FilterOutcome filter_output(std::string_view raw, const FilterPolicy& policy = {});

}  // namespace stylo
