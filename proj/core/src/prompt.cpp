#include "stylo/prompt.hpp"

#include "stylo/error.hpp"
#include "stylo/hash.hpp"

namespace stylo {

namespace {

constexpr std::string_view kChunkSlot = "{chunk1}";
constexpr std::string_view kTargetSlot = "{word_target}";

std::size_t occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos; pos = text.find(needle, pos + needle.size())) ++n;
  return n;
}

void replace_once(std::string& text, std::string_view slot, std::string_view value) {
  const auto pos = text.find(slot);
  text.replace(pos, slot.size(), value);
}

}  // namespace

void PromptTemplate::validate() const {
  for (auto slot : {kChunkSlot, kTargetSlot}) {
    const auto n = occurrences(user_text, slot);
    if (n != 1) {
      throw Error("prompt template must contain " + std::string(slot) + " exactly once (found " + std::to_string(n) +
                  ")");
    }
  }
  if (word_target == 0) throw Error("word_target must be positive");
}

PromptTemplate PromptTemplate::from_json(const nlohmann::json& j) {
  PromptTemplate t;
  t.system_text = j.value("system", t.system_text);
  t.user_text = j.value("user", t.user_text);
  t.word_target = j.value("word_target", t.word_target);
  t.validate();
  return t;
}

nlohmann::json PromptTemplate::to_json() const {
  return {{"system", system_text}, {"user", user_text}, {"word_target", word_target}};
}

std::string Prompt::hash() const { return sha256_hex(system + '\x1f' + user); }

std::string surface_text(const AnnotatedDocument& doc) {
  std::string out;
  for (const auto& s : doc.sentences) {
    std::string sentence;
    if (!s.text.empty()) {
      sentence = s.text;
    } else {
      bool space = false;
      for (const auto& t : s.tokens) {
        if (space) sentence += ' ';
        sentence += t.form;
        space = t.misc.find("SpaceAfter=No") == std::string::npos;
      }
    }
    if (sentence.empty()) continue;
    if (!out.empty()) out += ' ';
    out += sentence;
  }
  return out;
}

Prompt build_prompt(std::string_view chunk1, const PromptTemplate& tmpl) {
  tmpl.validate();
  if (chunk1.find_first_not_of(" \t\r\n") == std::string_view::npos) throw Error("chunk1 is empty");
  Prompt p;
  p.system = tmpl.system_text;
  p.user = tmpl.user_text;
  // Fill the target first so a literal "{word_target}" inside the chunk text
  // is left alone.
  replace_once(p.user, kTargetSlot, std::to_string(tmpl.word_target));
  replace_once(p.user, kChunkSlot, chunk1);
  return p;
}

Prompt build_prompt(const AnnotatedDocument& chunk1, const PromptTemplate& tmpl) {
  return build_prompt(surface_text(chunk1), tmpl);
}

}  // namespace stylo
