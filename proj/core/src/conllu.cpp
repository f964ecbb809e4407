#include "stylo/conllu.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "stylo/error.hpp"

namespace stylo {

namespace {

constexpr std::array<std::string_view, 17> kUniversalPos = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::map<std::string, std::string> parse_feats(std::string_view s, std::size_t line_no) {
  std::map<std::string, std::string> feats;
  if (s == "_") return feats;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find('|', start);
    if (end == std::string_view::npos) end = s.size();
    auto item = s.substr(start, end - start);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("malformed FEATS item '" + std::string(item) + "'", line_no);
    }
    feats.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    start = end + 1;
  }
  return feats;
}

std::string field_or_empty(std::string_view s) { return s == "_" ? std::string() : std::string(s); }

// Consumes "key = value" comments; returns false when the comment is not of that form.
bool split_comment(std::string_view body, std::string_view& key, std::string_view& value) {
  auto eq = body.find('=');
  if (eq == std::string_view::npos) return false;
  key = trim(body.substr(0, eq));
  value = trim(body.substr(eq + 1));
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options, bool lenient)
      : text_(text), options_(options), lenient_(lenient) {}

  ParseOutcome run() {
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      auto nl = text_.find('\n', pos);
      auto line = text_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (nl == std::string_view::npos && line.empty()) break;
      try {
        if (!skipping_ || is_newdoc(line)) handle(line);
      } catch (const ParseError& e) {
        if (!lenient_) throw;
        fail_document(e);
      }
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    if (!skipping_) {
      try {
        flush_sentence();
      } catch (const ParseError& e) {
        if (!lenient_) throw;
        fail_document(e);
      }
    }
    flush_document();
    return std::move(out_);
  }

 private:
  static bool is_newdoc(std::string_view line) {
    auto body = trim(line);
    if (body.empty() || body.front() != '#') return false;
    body.remove_prefix(1);
    return trim(body).starts_with("newdoc");
  }

  void handle(std::string_view line) {
    if (trim(line).empty()) {
      flush_sentence();
      return;
    }
    if (line.front() == '#') {
      handle_comment(trim(line.substr(1)));
      return;
    }
    handle_token(line);
  }

  void handle_comment(std::string_view body) {
    if (body.starts_with("newdoc")) {
      flush_sentence();
      flush_document();
      skipping_ = false;
      start_document();
      std::string_view key, value;
      if (split_comment(body, key, value) && key == "newdoc id" && !value.empty()) {
        doc_.doc_id = std::string(value);
      } else {
        doc_.doc_id = options_.default_doc_id + std::to_string(++auto_ids_);
      }
      return;
    }
    ensure_document();
    std::string_view key, value;
    if (split_comment(body, key, value)) {
      if (key == "text") {
        sentence_.text = std::string(value);
        return;
      }
      if (key == "source") {
        doc_.source.name = std::string(value);
        return;
      }
      if (key == "genre") {
        doc_.source.genre = std::string(value);
        return;
      }
    }
    sentence_.comments.emplace_back(body);
  }

  void handle_token(std::string_view line) {
    ensure_document();
    auto cols = split_tabs(line);
    if (cols.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()),
                       line_no_);
    }
    const auto id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
      sentence_.passthrough.emplace_back(sentence_.tokens.size(), std::string(line));
      return;
    }
    Token tok;
    if (!parse_int(id, tok.index) || tok.index < 1) {
      throw ParseError("invalid token id '" + std::string(id) + "'", line_no_);
    }
    if (static_cast<std::size_t>(tok.index) != sentence_.tokens.size() + 1) {
      throw ParseError("token ids must be contiguous from 1; got " + std::string(id), line_no_);
    }
    tok.form = std::string(cols[1]);
    tok.lemma = to_lower_ascii(cols[2] == "_" && cols[1] != "_" ? cols[1] : cols[2]);
    tok.upos = std::string(cols[3]);
    if (std::find(kUniversalPos.begin(), kUniversalPos.end(), tok.upos) == kUniversalPos.end()) {
      throw ParseError("unknown UPOS tag '" + tok.upos + "'", line_no_);
    }
    tok.xpos = field_or_empty(cols[4]);
    tok.feats = parse_feats(cols[5], line_no_);
    if (!parse_int(cols[6], tok.head) || tok.head < 0) {
      throw ParseError("non-integer head '" + std::string(cols[6]) + "'", line_no_);
    }
    tok.deprel = field_or_empty(cols[7]);
    tok.deps = std::string(cols[8]);
    tok.misc = std::string(cols[9]);
    sentence_.tokens.push_back(std::move(tok));
  }

  void ensure_document() {
    if (in_document_) return;
    start_document();
    doc_.doc_id = options_.default_doc_id + std::to_string(++auto_ids_);
    implicit_ = true;
  }

  void start_document() {
    doc_ = AnnotatedDocument{};
    sentence_ = Sentence{};
    in_document_ = true;
    implicit_ = false;
    doc_start_line_ = line_no_;
  }

  void flush_sentence() {
    if (!in_document_) return;
    if (sentence_.tokens.empty()) {
      if (!sentence_.passthrough.empty()) {
        throw ParseError("sentence has multiword or empty nodes but no regular tokens", line_no_);
      }
      // Comments between sentences attach to the next sentence.
      return;
    }
    check_tree(sentence_);
    doc_.sentences.push_back(std::move(sentence_));
    sentence_ = Sentence{};
  }

  void flush_document() {
    // File-level comments ahead of the first newdoc (generator, model) open
    // an implicit document that never receives a sentence; drop it.
    if (in_document_ && implicit_ && doc_.sentences.empty()) {
      --auto_ids_;
    } else if (in_document_ && !skipping_) {
      out_.documents.push_back(std::move(doc_));
    }
    in_document_ = false;
    doc_ = AnnotatedDocument{};
    sentence_ = Sentence{};
  }

  void fail_document(const ParseError& e) {
    std::string id = in_document_ ? doc_.doc_id : std::string();
    out_.errors.push_back(DocumentError{id, e.line(), e.what()});
    skipping_ = true;
    in_document_ = false;
    doc_ = AnnotatedDocument{};
    sentence_ = Sentence{};
  }

  std::string_view text_;
  const ParseOptions& options_;
  bool lenient_;
  ParseOutcome out_;
  AnnotatedDocument doc_;
  Sentence sentence_;
  bool in_document_ = false;
  bool skipping_ = false;
  bool implicit_ = false;
  std::size_t line_no_ = 0;
  std::size_t doc_start_line_ = 0;
  int auto_ids_ = 0;
};

}  // namespace

bool Token::has_feat(std::string_view key, std::string_view value) const {
  auto it = feats.find(std::string(key));
  if (it == feats.end()) return false;
  std::string_view values = it->second;
  std::size_t start = 0;
  while (start <= values.size()) {
    auto end = values.find(',', start);
    if (end == std::string_view::npos) end = values.size();
    if (values.substr(start, end - start) == value) return true;
    start = end + 1;
  }
  return false;
}

std::size_t Sentence::word_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return !t.is_punct(); }));
}

std::size_t AnnotatedDocument::word_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.word_count();
  return n;
}

bool AnnotatedDocument::headless() const noexcept {
  return std::any_of(sentences.begin(), sentences.end(), [](const Sentence& s) { return s.headless; });
}

std::size_t word_count(const AnnotatedDocument& doc) noexcept { return doc.word_count(); }

std::string parent_id(std::string_view doc_id) {
  return std::string(doc_id.substr(0, doc_id.find('#')));
}

bool check_tree(Sentence& sentence) {
  const auto n = static_cast<int>(sentence.tokens.size());
  int roots = 0;
  bool ok = true;
  for (const auto& t : sentence.tokens) {
    if (t.head == 0) ++roots;
    if (t.head < 0 || t.head > n || t.head == t.index) ok = false;
  }
  if (roots != 1) ok = false;
  if (ok) {
    // Every chain of heads must reach the root within n steps.
    for (const auto& t : sentence.tokens) {
      int cur = t.index;
      int steps = 0;
      while (cur != 0 && steps <= n) {
        cur = sentence.tokens[static_cast<std::size_t>(cur - 1)].head;
        ++steps;
      }
      if (cur != 0) {
        ok = false;
        break;
      }
    }
  }
  sentence.headless = !ok;
  return sentence.headless;
}

std::vector<AnnotatedDocument> parse_conllu(std::string_view text, const ParseOptions& options) {
  return Parser(text, options, false).run().documents;
}

ParseOutcome parse_conllu_lenient(std::string_view text, const ParseOptions& options) {
  return Parser(text, options, true).run();
}

std::vector<AnnotatedDocument> read_conllu_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_conllu(ss.str(), options);
}

std::string write_conllu(const std::vector<AnnotatedDocument>& docs) {
  std::string out;
  auto col = [](const std::string& s) -> const std::string& {
    static const std::string underscore = "_";
    return s.empty() ? underscore : s;
  };
  for (const auto& doc : docs) {
    out += "# newdoc id = " + doc.doc_id + "\n";
    if (!doc.source.name.empty()) out += "# source = " + doc.source.name + "\n";
    if (!doc.source.genre.empty()) out += "# genre = " + doc.source.genre + "\n";
    for (const auto& s : doc.sentences) {
      for (const auto& c : s.comments) out += "# " + c + "\n";
      if (!s.text.empty()) out += "# text = " + s.text + "\n";
      std::size_t pt = 0;
      for (std::size_t i = 0; i <= s.tokens.size(); ++i) {
        while (pt < s.passthrough.size() && s.passthrough[pt].first == i) {
          out += s.passthrough[pt].second + "\n";
          ++pt;
        }
        if (i == s.tokens.size()) break;
        const auto& t = s.tokens[i];
        std::string feats;
        for (const auto& [k, v] : t.feats) {
          if (!feats.empty()) feats += '|';
          feats += k + "=" + v;
        }
        out += std::to_string(t.index) + '\t' + col(t.form) + '\t' + col(t.lemma) + '\t' + col(t.upos) +
               '\t' + col(t.xpos) + '\t' + col(feats) + '\t' + std::to_string(t.head) + '\t' +
               col(t.deprel) + '\t' + col(t.deps) + '\t' + col(t.misc) + '\n';
      }
      out += "\n";
    }
  }
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace stylo
