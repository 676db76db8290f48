#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unirec/core/tags.hpp"
#include "unirec/hst/document.hpp"

namespace unirec::hst {

/// Lines of a paragraph joined by <|ln|>; every paragraph, the last one
/// included, closed by <|pn|>. Throws Error("empty document") and the other
/// `validate` errors.
std::string encode_hst(const StructuredDocument& doc);

/// Inference-time reconstruction: drops every <|ln|>, turns every <|pn|>
/// into "\n\n" and trims trailing whitespace. Total and idempotent; deleting
/// a <|ln|> never leaves a freshly formed token behind.
std::string decode_hst(std::string_view pred);

/// Removes both supervision tokens; where a removal leaves two spaces
/// touching, one of them goes too. Builds the "without HST" label variant.
std::string strip_hst(std::string_view label);

struct LevelSample {
  std::string label;
  HierLevel level = HierLevel::Line;

  bool operator==(const LevelSample&) const = default;
};

/// Samples of one granularity cut from a document:
///   Character       every non-space scalar of the Text spans
///   Word            `line_words` surfaces (Formula spans stay whole)
///   Line            `join_line` of each line, no supervision tokens
///   Paragraph       encode_hst of each paragraph on its own
///   MultiParagraph  encode_hst of consecutive runs of 2..4 paragraphs; the
///                   run lengths come from `seed`. Empty below 2 paragraphs.
std::vector<LevelSample> derive_levels(const StructuredDocument& doc, HierLevel level,
                                       std::uint64_t seed);

}  // namespace unirec::hst
