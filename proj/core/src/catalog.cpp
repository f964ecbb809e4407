#include "stylo/catalog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "stylo/error.hpp"
#include "stylo/hash.hpp"

namespace stylo {

namespace {

using json = nlohmann::json;
using Lexicons = std::map<std::string, std::vector<std::string>>;

class RuleReader {
 public:
  explicit RuleReader(const Lexicons& lexicons) : lexicons_(lexicons) {}

  Rule rule(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type")) throw ParseError(where + ": rule needs a 'type'");
    const auto type = j["type"].get<std::string>();
    Rule r;
    if (type == "token") {
      r.kind = RuleKind::Token;
      r.match = predicate(require(j, "match", where), where + ".match");
    } else if (type == "sequence") {
      r.kind = RuleKind::Sequence;
      const auto& elems = require(j, "elements", where);
      if (!elems.is_array() || elems.empty()) throw ParseError(where + ": sequence needs elements");
      for (const auto& e : elems) r.sequence.push_back(element(e, where + ".elements"));
    } else if (type == "phrases") {
      r.kind = RuleKind::Phrases;
      for (const auto& p : strings(require(j, "phrases", where), where + ".phrases")) {
        std::vector<std::string> words;
        std::istringstream ss(p);
        for (std::string w; ss >> w;) words.push_back(w);
        if (!words.empty()) r.phrases.push_back(std::move(words));
      }
      std::stable_sort(r.phrases.begin(), r.phrases.end(),
                       [](const auto& a, const auto& b) { return a.size() > b.size(); });
      if (j.contains("match_on")) {
        const auto on = j["match_on"].get<std::string>();
        if (on != "form" && on != "lemma") throw ParseError(where + ": match_on must be form or lemma");
        r.phrases_on_lemma = on == "lemma";
      }
      if (j.contains("first")) r.first.push_back(predicate(j["first"], where + ".first"));
    } else if (type == "union") {
      r.kind = RuleKind::Union;
      const auto& rules = require(j, "rules", where);
      if (!rules.is_array() || rules.empty()) throw ParseError(where + ": union needs rules");
      for (std::size_t i = 0; i < rules.size(); ++i) {
        r.rules.push_back(rule(rules[i], where + ".rules[" + std::to_string(i) + "]"));
      }
    } else {
      throw ParseError(where + ": unknown rule type '" + type + "'");
    }
    return r;
  }

 private:
  static const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ParseError(where + ": missing '" + key + "'");
    return j[key];
  }

  std::vector<std::string> strings(const json& j, const std::string& where) {
    std::vector<std::string> out;
    auto add = [&](const json& v) {
      if (!v.is_string()) throw ParseError(where + ": expected string");
      auto s = v.get<std::string>();
      if (!s.empty() && s.front() == '@') {
        auto it = lexicons_.find(s.substr(1));
        if (it == lexicons_.end()) throw ParseError(where + ": unknown lexicon '" + s + "'");
        out.insert(out.end(), it->second.begin(), it->second.end());
      } else {
        out.push_back(std::move(s));
      }
    };
    if (j.is_array()) {
      for (const auto& v : j) add(v);
    } else {
      add(j);
    }
    return out;
  }

  std::vector<TokenPredicate> predicates(const json& j, const std::string& where) {
    std::vector<TokenPredicate> out;
    if (j.is_array()) {
      for (const auto& v : j) out.push_back(predicate(v, where));
    } else {
      out.push_back(predicate(j, where));
    }
    return out;
  }

  TokenPredicate predicate(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": predicate must be an object");
    TokenPredicate p;
    for (const auto& [key, value] : j.items()) {
      if (key == "upos") {
        p.upos = strings(value, where);
      } else if (key == "xpos") {
        p.xpos = strings(value, where);
      } else if (key == "lemma") {
        p.lemma = strings(value, where);
      } else if (key == "form") {
        p.form = strings(value, where);
      } else if (key == "lemma_suffix") {
        p.lemma_suffix = strings(value, where);
      } else if (key == "deprel") {
        p.deprel = strings(value, where);
      } else if (key == "deprel_not") {
        p.deprel_not = strings(value, where);
      } else if (key == "feats") {
        if (!value.is_object()) throw ParseError(where + ": feats must be an object");
        for (const auto& [fk, fv] : value.items()) p.feats[fk] = strings(fv, where);
      } else if (key == "min_length") {
        p.min_length = value.get<std::size_t>();
      } else if (key == "sentence_initial") {
        p.sentence_initial = value.get<bool>();
      } else if (key == "in_question") {
        p.in_question = value.get<bool>();
      } else if (key == "upos_matches_head") {
        p.upos_matches_head = value.get<bool>();
      } else if (key == "head") {
        p.head.push_back(predicate(value, where + ".head"));
      } else if (key == "has_child") {
        p.has_child = predicates(value, where + ".has_child");
      } else if (key == "no_child") {
        p.no_child = predicates(value, where + ".no_child");
      } else if (key == "any_of") {
        p.any_of = predicates(value, where + ".any_of");
      } else if (key == "none_of" || key == "not") {
        auto more = predicates(value, where + "." + key);
        p.none_of.insert(p.none_of.end(), more.begin(), more.end());
      } else if (key == "min" || key == "max") {
        // sequence repetition bounds, handled by element()
      } else {
        throw ParseError(where + ": unknown predicate key '" + key + "'");
      }
    }
    for (auto& s : p.lemma) s = to_lower(s);
    for (auto& s : p.form) s = to_lower(s);
    return p;
  }

  SequenceElement element(const json& j, const std::string& where) {
    SequenceElement e;
    e.predicate = predicate(j, where);
    e.min = j.value("min", std::size_t{1});
    e.max = j.value("max", e.min);
    if (e.max < e.min || e.max == 0) throw ParseError(where + ": invalid repetition bounds");
    return e;
  }

  static std::string to_lower(std::string s) {
    for (auto& c : s) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
  }

  const Lexicons& lexicons_;
};

void collect_lexicon_refs(const json& j, std::set<std::string>& out) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (!s.empty() && s.front() == '@') out.insert(s.substr(1));
  } else if (j.is_array() || j.is_object()) {
    for (const auto& v : j) collect_lexicon_refs(v, out);
  }
}

}  // namespace

bool TokenPredicate::uses_syntax() const {
  if (!deprel.empty() || !deprel_not.empty() || upos_matches_head.has_value() || !head.empty() ||
      !has_child.empty() || !no_child.empty()) {
    return true;
  }
  auto any = [](const std::vector<TokenPredicate>& ps) {
    return std::any_of(ps.begin(), ps.end(), [](const TokenPredicate& p) { return p.uses_syntax(); });
  };
  return any(any_of) || any(none_of);
}

bool Rule::uses_syntax() const {
  switch (kind) {
    case RuleKind::Token:
      return match.uses_syntax();
    case RuleKind::Sequence:
      return std::any_of(sequence.begin(), sequence.end(),
                         [](const SequenceElement& e) { return e.predicate.uses_syntax(); });
    case RuleKind::Phrases:
      return std::any_of(first.begin(), first.end(), [](const TokenPredicate& p) { return p.uses_syntax(); });
    case RuleKind::Union:
      return std::any_of(rules.begin(), rules.end(), [](const Rule& r) { return r.uses_syntax(); });
  }
  return false;
}

FeatureCatalog FeatureCatalog::from_json(const nlohmann::json& j, const Lexicons& lexicons) {
  if (!j.is_object() || !j.contains("features") || !j["features"].is_array()) {
    throw ParseError("catalog must be an object with a 'features' array");
  }
  RuleReader reader(lexicons);
  FeatureCatalog cat;
  std::set<std::string> seen;
  for (const auto& f : j["features"]) {
    FeatureDef def;
    try {
      def.id = f.at("id").get<std::string>();
      def.short_name = f.at("short_name").get<std::string>();
      def.category = f.value("category", std::string());
      const auto kind = f.at("kind").get<std::string>();
      if (kind == "count-rate") {
        def.kind = FeatureKind::CountRate;
        if (!f.contains("rule")) throw ParseError(def.id + ": count-rate feature without a rule");
        def.rule = reader.rule(f["rule"], def.id);
        def.syntactic = def.rule.uses_syntax();
      } else if (kind == "index") {
        def.kind = FeatureKind::Index;
        const auto index = f.at("index").get<std::string>();
        if (index == "type_token_ratio") {
          def.index = IndexKind::TypeTokenRatio;
        } else if (index == "mean_word_length") {
          def.index = IndexKind::MeanWordLength;
        } else {
          throw ParseError(def.id + ": unknown index '" + index + "'");
        }
      } else {
        throw ParseError(def.id + ": unknown kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("catalog record: ") + e.what());
    }
    if (!seen.insert(def.id).second) throw ParseError("duplicate feature id " + def.id);
    cat.features_.push_back(std::move(def));
  }
  cat.hash_ = sha256_hex(j.dump());
  return cat;
}

FeatureCatalog FeatureCatalog::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open catalog " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  namespace fs = std::filesystem;
  const auto dir = fs::path(path).parent_path() / j.value("lexicon_dir", std::string("lexicons"));
  std::set<std::string> refs;
  collect_lexicon_refs(j["features"], refs);
  Lexicons lexicons;
  std::string hash_input = text;
  for (const auto& name : refs) {
    const auto file = (dir / (name + ".txt")).string();
    lexicons[name] = read_lexicon(file);
    hash_input += '\0' + name + '\0' + sha256_file_hex(file);
  }
  auto cat = from_json(j, lexicons);
  cat.hash_ = sha256_hex(hash_input);
  return cat;
}

std::optional<std::size_t> FeatureCatalog::index_of(const std::string& id_or_name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].id == id_or_name || features_[i].short_name == id_or_name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> FeatureCatalog::ids() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.id);
  return out;
}

std::vector<std::string> read_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lexicon " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace stylo
