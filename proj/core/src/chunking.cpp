#include "stylo/chunking.hpp"

#include <stdexcept>

#include "stylo/error.hpp"

namespace stylo {

namespace {

// Index one past the last sentence of the shortest span starting at `first`
// that reaches `target` words, or npos.
std::size_t span_end(const AnnotatedDocument& doc, std::size_t first, std::size_t target) {
  std::size_t words = 0;
  for (std::size_t i = first; i < doc.sentences.size(); ++i) {
    words += doc.sentences[i].word_count();
    if (words >= target) return i + 1;
  }
  return std::string::npos;
}

AnnotatedDocument slice(const AnnotatedDocument& doc, std::size_t first, std::size_t end,
                        std::string_view suffix, std::string_view source) {
  AnnotatedDocument out;
  out.doc_id = doc.doc_id + "#" + std::string(suffix);
  out.source = SourceLabel{std::string(source), doc.source.genre};
  out.sentences.assign(doc.sentences.begin() + static_cast<std::ptrdiff_t>(first),
                       doc.sentences.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

}  // namespace

ChunkPair split_chunks(const AnnotatedDocument& doc, std::size_t target_words) {
  if (target_words == 0) throw std::invalid_argument("target_words must be positive");
  const auto total = doc.word_count();
  if (total < 2 * target_words) throw TooShortError(total, 2 * target_words);

  const auto end1 = span_end(doc, 0, target_words);
  const auto end2 = end1 == std::string::npos ? end1 : span_end(doc, end1, target_words);
  if (end2 == std::string::npos) throw TooShortError(total, 2 * target_words);

  ChunkPair pair;
  pair.doc_id = doc.doc_id;
  pair.chunk1 = slice(doc, 0, end1, "chunk1", kHumanChunk1);
  pair.chunk2 = slice(doc, end1, end2, "chunk2", kHumanChunk2);
  pair.chunk1_first = 0;
  pair.chunk1_last = end1 - 1;
  pair.chunk2_first = end1;
  pair.chunk2_last = end2 - 1;
  return pair;
}

}  // namespace stylo
