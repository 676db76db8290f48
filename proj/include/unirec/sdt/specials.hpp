#pragma once

#include <array>
#include <string_view>

namespace unirec::sdt {

inline constexpr std::string_view kBos = "<BOS>";
inline constexpr std::string_view kEos = "<EOS>";
inline constexpr std::string_view kLineBreak = "<|ln|>";
inline constexpr std::string_view kParagraphEnd = "<|pn|>";
inline constexpr std::string_view kPad = "<PAD>";

// Merged-vocabulary order of the reserved block.
inline constexpr std::array<std::string_view, 5> kReservedSpecials{kBos, kEos, kLineBreak,
                                                                   kParagraphEnd, kPad};

}  // namespace unirec::sdt

#include <span>
#include <vector>

namespace unirec::sdt {

struct SpecialSplit {
  std::string_view text;
  int special = -1;  // index into the searched list, -1 for plain text
};

/// Cuts every occurrence of the listed surfaces out of `s` (leftmost first,
/// longest wins on a tie), keeping the plain runs between them.
std::vector<SpecialSplit> split_specials(std::string_view s,
                                         std::span<const std::string_view> surfaces);

}  // namespace unirec::sdt
