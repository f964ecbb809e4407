#include "stylo/filter.hpp"

#include <regex>

#include "stylo/conllu.hpp"
#include "stylo/error.hpp"

namespace stylo {

namespace {

constexpr std::string_view kCurlyApostrophe = "\xE2\x80\x99";

// Leading boilerplate such as "Here is the continuation of the text:" or
// "Sure! Here's a continuation:" up to and including the colon, or a whole
// first line announcing the continuation.
const std::regex& preamble_pattern() {
  static const std::regex re(
      "^\\s*(?:(?:sure|certainly|okay|ok|of course)[!,.]?\\s*)?"
      "(?:(?:here(?:'|\xE2\x80\x99)s|here is|below is)[^:\\n]{0,160}?(?:continu)[^:\\n]{0,160}?:"
      "|(?:here(?:'|\xE2\x80\x99)s|here is)[^\\n]{0,200}?continuation[^\\n]{0,200}\\n"
      "|continuation(?: of the text)?\\s*:)",
      std::regex::icase | std::regex::ECMAScript);
  return re;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string normalize_apostrophes(std::string s) {
  for (auto pos = s.find(kCurlyApostrophe); pos != std::string::npos; pos = s.find(kCurlyApostrophe, pos + 1)) {
    s.replace(pos, kCurlyApostrophe.size(), "'");
  }
  return s;
}

// Byte length of the first `n` code points.
std::size_t prefix_bytes(std::string_view s, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t cp = 0; i < s.size() && cp < n; ++cp) {
    ++i;
    while (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) ++i;
  }
  return i;
}

}  // namespace

void FilterPolicy::validate() const {
  if (min_words < 1) throw Error("min_words must be >= 1");
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::Refusal: return "refusal";
    case RejectReason::TooShort: return "too_short";
    case RejectReason::ApiError: return "api_error";
  }
  return "none";
}

std::size_t count_words(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::string strip_preamble(std::string_view text) {
  std::string out(trim(text));
  std::smatch m;
  while (std::regex_search(out, m, preamble_pattern(), std::regex_constants::match_continuous)) {
    out = std::string(trim(std::string_view(out).substr(static_cast<std::size_t>(m.length(0)))));
  }
  return out;
}

FilterOutcome filter_output(std::string_view raw, const FilterPolicy& policy) {
  policy.validate();
  FilterOutcome out;
  out.text = policy.strip_preamble ? strip_preamble(raw) : std::string(trim(raw));
  out.word_count = count_words(out.text);

  const std::string head = to_lower_ascii(normalize_apostrophes(out.text.substr(0, prefix_bytes(out.text, kRefusalWindow))));
  for (const auto& phrase : policy.refusal_phrases) {
    const auto needle = to_lower_ascii(normalize_apostrophes(phrase));
    if (!needle.empty() && head.find(needle) != std::string::npos) {
      out.reason = RejectReason::Refusal;
      return out;
    }
  }
  if (out.word_count < policy.min_words) {
    out.reason = RejectReason::TooShort;
    return out;
  }
  out.accepted = true;
  return out;
}

}  // namespace stylo
