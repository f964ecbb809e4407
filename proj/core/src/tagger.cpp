#include "stylo/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "stylo/error.hpp"

namespace stylo {

namespace {

bool contains(const std::vector<std::string>& list, const std::string& value) {
  return std::find(list.begin(), list.end(), value) != list.end();
}

bool ends_with_any(const std::string& s, const std::vector<std::string>& suffixes) {
  return std::any_of(suffixes.begin(), suffixes.end(), [&](const std::string& suf) {
    return s.size() > suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  });
}

std::size_t first_word(const Sentence& s) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (!s.tokens[i].is_punct()) return i;
  }
  return s.tokens.size();
}

bool is_question(const Sentence& s) {
  for (auto it = s.tokens.rbegin(); it != s.tokens.rend(); ++it) {
    if (!it->is_punct()) return false;
    if (it->form.find('?') != std::string::npos) return true;
  }
  return false;
}

const Token* governor(const Sentence& s, const Token& t) {
  if (t.head <= 0 || static_cast<std::size_t>(t.head) > s.tokens.size()) return nullptr;
  return &s.tokens[static_cast<std::size_t>(t.head - 1)];
}

bool any_child(const TokenPredicate& p, const Sentence& s, std::size_t i) {
  const int idx = s.tokens[i].index;
  for (std::size_t c = 0; c < s.tokens.size(); ++c) {
    if (s.tokens[c].head == idx && c != i && evaluate(p, s, c)) return true;
  }
  return false;
}

// Longest end position for sequence elements [k..] starting at token `pos`, or npos.
std::size_t sequence_end(const std::vector<SequenceElement>& elems, std::size_t k, const Sentence& s,
                         std::size_t pos) {
  if (k == elems.size()) return pos;
  const auto& e = elems[k];
  std::size_t run = 0;
  while (run < e.max && pos + run < s.tokens.size() && evaluate(e.predicate, s, pos + run)) ++run;
  std::size_t best = std::string::npos;
  for (std::size_t reps = run + 1; reps-- > e.min;) {
    const auto end = sequence_end(elems, k + 1, s, pos + reps);
    if (end != std::string::npos && (best == std::string::npos || end > best)) best = end;
  }
  return best;
}

std::size_t phrase_length(const Rule& rule, const Sentence& s, std::size_t pos) {
  if (!rule.first.empty() && !evaluate(rule.first.front(), s, pos)) return 0;
  for (const auto& phrase : rule.phrases) {
    if (pos + phrase.size() > s.tokens.size()) continue;
    bool ok = true;
    for (std::size_t w = 0; w < phrase.size() && ok; ++w) {
      const auto& tok = s.tokens[pos + w];
      ok = (rule.phrases_on_lemma ? tok.lemma : to_lower_ascii(tok.form)) == phrase[w];
    }
    if (ok) return phrase.size();
  }
  return 0;
}

// Longest match length of `rule` starting at each token (0 = no match).
std::vector<std::size_t> candidates(const Rule& rule, const Sentence& s) {
  std::vector<std::size_t> len(s.tokens.size(), 0);
  switch (rule.kind) {
    case RuleKind::Token:
      for (std::size_t i = 0; i < s.tokens.size(); ++i) len[i] = evaluate(rule.match, s, i) ? 1 : 0;
      break;
    case RuleKind::Sequence:
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const auto end = sequence_end(rule.sequence, 0, s, i);
        len[i] = end == std::string::npos ? 0 : end - i;
      }
      break;
    case RuleKind::Phrases:
      for (std::size_t i = 0; i < s.tokens.size(); ++i) len[i] = phrase_length(rule, s, i);
      break;
    case RuleKind::Union:
      for (const auto& sub : rule.rules) {
        const auto sub_len = candidates(sub, s);
        for (std::size_t i = 0; i < len.size(); ++i) len[i] = std::max(len[i], sub_len[i]);
      }
      break;
  }
  return len;
}

}  // namespace

bool evaluate(const TokenPredicate& p, const Sentence& s, std::size_t i) {
  const Token& t = s.tokens[i];
  if (!p.upos.empty() && !contains(p.upos, t.upos)) return false;
  if (!p.xpos.empty() && !contains(p.xpos, t.xpos)) return false;
  if (!p.lemma.empty() && !contains(p.lemma, t.lemma)) return false;
  if (!p.form.empty() && !contains(p.form, to_lower_ascii(t.form))) return false;
  if (!p.lemma_suffix.empty() && !ends_with_any(t.lemma, p.lemma_suffix)) return false;
  if (!p.deprel.empty() && !contains(p.deprel, t.deprel)) return false;
  if (!p.deprel_not.empty() && contains(p.deprel_not, t.deprel)) return false;
  for (const auto& [key, values] : p.feats) {
    if (std::none_of(values.begin(), values.end(), [&](const std::string& v) { return t.has_feat(key, v); })) {
      return false;
    }
  }
  if (p.min_length && utf8_length(t.form) < *p.min_length) return false;
  if (p.sentence_initial && (first_word(s) == i) != *p.sentence_initial) return false;
  if (p.in_question && is_question(s) != *p.in_question) return false;
  if (p.upos_matches_head || !p.head.empty()) {
    const Token* gov = governor(s, t);
    if (gov == nullptr) return false;
    if (p.upos_matches_head && (gov->upos == t.upos) != *p.upos_matches_head) return false;
    if (!p.head.empty() && !evaluate(p.head.front(), s, static_cast<std::size_t>(t.head - 1))) return false;
  }
  for (const auto& c : p.has_child) {
    if (!any_child(c, s, i)) return false;
  }
  for (const auto& c : p.no_child) {
    if (any_child(c, s, i)) return false;
  }
  if (!p.any_of.empty() &&
      std::none_of(p.any_of.begin(), p.any_of.end(), [&](const TokenPredicate& q) { return evaluate(q, s, i); })) {
    return false;
  }
  for (const auto& q : p.none_of) {
    if (evaluate(q, s, i)) return false;
  }
  return true;
}

std::vector<RuleMatch> match_rule(const Rule& rule, const Sentence& sentence) {
  const auto len = candidates(rule, sentence);
  std::vector<RuleMatch> out;
  for (std::size_t i = 0; i < len.size();) {
    if (len[i] > 0) {
      out.push_back(RuleMatch{i, len[i]});
      i += len[i];
    } else {
      ++i;
    }
  }
  return out;
}

std::size_t utf8_length(const std::string& s) noexcept {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

double mean_word_length(const AnnotatedDocument& doc) {
  std::size_t chars = 0;
  std::size_t words = 0;
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      if (t.is_punct()) continue;
      chars += utf8_length(t.form);
      ++words;
    }
  }
  if (words == 0) throw EmptyDocumentError(doc.doc_id);
  return static_cast<double>(chars) / static_cast<double>(words);
}

double type_token_ratio(const AnnotatedDocument& doc, bool* is_short) {
  std::unordered_set<std::string> types;
  std::size_t n = 0;
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      if (t.is_punct()) continue;
      if (n == kTypeTokenWindow) break;
      types.insert(to_lower_ascii(t.form));
      ++n;
    }
  }
  if (n == 0) throw EmptyDocumentError(doc.doc_id);
  if (is_short) *is_short = n < kTypeTokenWindow;
  return static_cast<double>(types.size()) / static_cast<double>(n);
}

TaggedDocument tag_with_evidence(const AnnotatedDocument& doc, const FeatureCatalog& catalog) {
  const auto words = doc.word_count();
  if (words == 0) throw EmptyDocumentError(doc.doc_id);

  TaggedDocument out;
  auto& fv = out.features;
  fv.doc_id = doc.doc_id;
  fv.source = doc.source;
  fv.word_count = words;
  fv.headless = doc.headless();
  fv.values.reserve(catalog.size());
  fv.raw_counts.reserve(catalog.size());

  for (const auto& def : catalog.features()) {
    if (def.kind == FeatureKind::Index) {
      fv.raw_counts.push_back(-1);
      if (def.index == IndexKind::TypeTokenRatio) {
        fv.values.push_back(type_token_ratio(doc, &fv.short_ttr));
      } else {
        fv.values.push_back(mean_word_length(doc));
      }
      continue;
    }
    if (def.syntactic && fv.headless) {
      fv.raw_counts.push_back(-1);
      fv.values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    long count = 0;
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      const auto& sentence = doc.sentences[si];
      for (const auto& m : match_rule(def.rule, sentence)) {
        ++count;
        out.evidence.push_back(MatchSpan{def.id, si, sentence.tokens[m.start].index,
                                         sentence.tokens[m.start + m.length - 1].index});
      }
    }
    fv.raw_counts.push_back(count);
    fv.values.push_back(static_cast<double>(count) / static_cast<double>(words) * 1000.0);
  }
  return out;
}

FeatureVector tag(const AnnotatedDocument& doc, const FeatureCatalog& catalog) {
  return tag_with_evidence(doc, catalog).features;
}

}  // namespace stylo
