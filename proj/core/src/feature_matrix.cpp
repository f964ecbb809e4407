#include "stylo/feature_matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

#include "stylo/csv.hpp"
#include "stylo/error.hpp"

namespace stylo {

bool FeatureRow::complete() const noexcept {
  return std::none_of(values.begin(), values.end(), [](double v) { return std::isnan(v); });
}

void FeatureMatrix::add_row(FeatureRow row) {
  if (row.values.size() != feature_ids_.size()) {
    throw ModelError("row " + row.doc_id + " has " + std::to_string(row.values.size()) + " values, expected " +
                     std::to_string(feature_ids_.size()));
  }
  rows_.push_back(std::move(row));
}

std::size_t FeatureMatrix::column(const std::string& feature_id) const {
  auto it = std::find(feature_ids_.begin(), feature_ids_.end(), feature_id);
  if (it == feature_ids_.end()) throw ModelError("missing feature column " + feature_id);
  return static_cast<std::size_t>(it - feature_ids_.begin());
}

std::vector<std::string> FeatureMatrix::labels() const {
  std::set<std::string> s;
  for (const auto& r : rows_) s.insert(r.source);
  return {s.begin(), s.end()};
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<std::size_t>& indices) const {
  FeatureMatrix out(feature_ids_);
  out.metadata_ = metadata_;
  out.rows_.reserve(indices.size());
  for (auto i : indices) out.rows_.push_back(rows_.at(i));
  return out;
}

FeatureMatrix FeatureMatrix::filter_sources(const std::vector<std::string>& sources) const {
  FeatureMatrix out(feature_ids_);
  out.metadata_ = metadata_;
  for (const auto& r : rows_) {
    if (std::find(sources.begin(), sources.end(), r.source) != sources.end()) out.rows_.push_back(r);
  }
  return out;
}

std::size_t FeatureMatrix::drop_incomplete() {
  const auto before = rows_.size();
  std::erase_if(rows_, [](const FeatureRow& r) { return !r.complete(); });
  return before - rows_.size();
}

std::string FeatureMatrix::to_csv() const {
  std::string out;
  for (const auto& [k, v] : metadata_) out += "# " + k + ": " + v + "\n";
  std::vector<std::string> header = {"doc_id", "source", "word_count"};
  header.insert(header.end(), feature_ids_.begin(), feature_ids_.end());
  out += csv::join(header) + "\n";
  for (const auto& r : rows_) {
    std::vector<std::string> fields = {r.doc_id, r.source, std::to_string(r.word_count)};
    for (double v : r.values) fields.push_back(csv::format_number(v));
    out += csv::join(fields) + "\n";
  }
  return out;
}

FeatureMatrix FeatureMatrix::from_csv(std::string_view text) {
  FeatureMatrix m;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!have_header && line.front() == '#') {
      auto body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      auto colon = body.find(": ");
      if (colon != std::string_view::npos) {
        m.metadata_.emplace_back(std::string(body.substr(0, colon)), std::string(body.substr(colon + 2)));
      }
      continue;
    }
    std::vector<std::string> fields;
    try {
      fields = csv::split(line);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!have_header) {
      if (fields.size() < 3 || fields[0] != "doc_id" || fields[1] != "source" || fields[2] != "word_count") {
        throw ParseError("feature matrix header must start with doc_id,source,word_count", line_no);
      }
      m.feature_ids_.assign(fields.begin() + 3, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != m.feature_ids_.size() + 3) {
      throw ParseError("expected " + std::to_string(m.feature_ids_.size() + 3) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    FeatureRow row;
    row.doc_id = fields[0];
    row.source = fields[1];
    try {
      row.word_count = static_cast<std::size_t>(std::stoull(fields[2]));
      for (std::size_t i = 3; i < fields.size(); ++i) row.values.push_back(csv::parse_number(fields[i]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const std::exception&) {
      throw ParseError("invalid word_count '" + fields[2] + "'", line_no);
    }
    m.rows_.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("feature matrix has no header");
  return m;
}

FeatureMatrix FeatureMatrix::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return from_csv(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void FeatureMatrix::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << to_csv();
}

TagCorpusResult tag_corpus(const std::vector<AnnotatedDocument>& docs, const FeatureCatalog& catalog,
                           unsigned threads) {
  std::vector<std::variant<std::monostate, FeatureVector, std::string>> results(docs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < docs.size(); i = next++) {
      try {
        results[i] = tag(docs[i], catalog);
      } catch (const Error& e) {
        results[i] = std::string(e.what());
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(docs.size(), 1)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  TagCorpusResult out{FeatureMatrix(catalog.ids()), {}};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (auto* fv = std::get_if<FeatureVector>(&results[i])) {
      out.matrix.add_row(FeatureRow{fv->doc_id, fv->source.name, fv->word_count, std::move(fv->values)});
    } else {
      out.errors.push_back(DocumentError{docs[i].doc_id, 0, std::get<std::string>(results[i])});
    }
  }
  return out;
}

std::string errors_to_csv(const std::vector<DocumentError>& errors) {
  std::string out = "doc_id,line,error\n";
  for (const auto& e : errors) out += csv::join({e.doc_id, std::to_string(e.line), e.message}) + "\n";
  return out;
}

FeatureMatrix concat(const std::vector<FeatureMatrix>& parts) {
  if (parts.empty()) return {};
  FeatureMatrix out(parts.front().feature_ids());
  out.metadata() = parts.front().metadata();
  for (const auto& m : parts) {
    if (m.feature_ids() != out.feature_ids()) throw ModelError("feature matrices have different columns");
    for (const auto& r : m.rows()) out.add_row(r);
  }
  return out;
}

}  // namespace stylo
