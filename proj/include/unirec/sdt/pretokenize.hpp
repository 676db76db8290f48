#pragma once

#include <string_view>
#include <vector>

namespace unirec::sdt {

// Splits raw bytes into merge-isolated chunks; BPE merges never cross a
// chunk boundary. Chunk kinds (all but control words optionally led by one
// space):
//   - a LaTeX control word: '\' followed by ASCII letters ("\frac")
//   - a letter run (ASCII letters and any byte >= 0x80, so UTF-8 stays whole)
//   - a digit run
//   - a run of other punctuation
// Remaining whitespace forms its own runs. Concatenating the chunks yields
// the input.
std::vector<std::string_view> pretokenize(std::string_view raw);

}  // namespace unirec::sdt
