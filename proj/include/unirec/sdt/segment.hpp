#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "unirec/core/tags.hpp"

namespace unirec::sdt {

struct Segment {
  std::string content;
  SpanKind kind = SpanKind::Text;

  bool operator==(const Segment&) const = default;
};

struct SegmentedLabel {
  std::vector<Segment> segments;

  /// Concatenation of all segment contents; equals the segmented label.
  std::string join() const;
};

/// Splits a label at LaTeX math delimiters: `$...$`, `$$...$$`, `\(...\)`,
/// `\[...\]` and `\begin{equation}...\end{equation}`. Formula segments keep
/// their delimiters. A backslash escapes the next byte, so `\$` and `\\` are
/// literal. Empty segments are not emitted.
///
/// Throws ParseError for an opener without a closer, a stray closer, or a
/// literal <BOS>/<EOS>/<PAD> (which could not survive a decode).
SegmentedLabel segment_label(std::string_view label);

}  // namespace unirec::sdt
