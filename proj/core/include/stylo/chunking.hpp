#pragma once

#include <cstddef>
#include <string>

#include "stylo/conllu.hpp"

namespace stylo {

/// Two consecutive sentence-aligned spans taken from the start of a document.
struct ChunkPair {
  std::string doc_id;
  AnnotatedDocument chunk1;  ///< doc_id "<parent>#chunk1", source human_chunk1
  AnnotatedDocument chunk2;  ///< doc_id "<parent>#chunk2", source human_chunk2
  std::size_t chunk1_first = 0;  ///< sentence index range [first, last] in the parent
  std::size_t chunk1_last = 0;
  std::size_t chunk2_first = 0;
  std::size_t chunk2_last = 0;
};

/// chunk1 is the shortest sentence prefix with at least `target_words` words and
/// chunk2 the shortest span right after it reaching the same target. Sentences
/// after chunk2 are dropped. Throws TooShortError when the document has fewer
/// than 2 * target_words words or the second span cannot reach the target.
ChunkPair split_chunks(const AnnotatedDocument& doc, std::size_t target_words);

}  // namespace stylo
