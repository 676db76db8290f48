#pragma once

#include <cstddef>

namespace unirec {

// Maximum label length in tokens, <BOS> and <EOS> included.
inline constexpr std::size_t kMaxTokenLength = 1024;

// Vocabulary size of the full-scale recognizer. Desk-scale builds honor
// whatever target they are configured with instead.
inline constexpr std::size_t kReferenceVocabularySize = 56371;

}  // namespace unirec
