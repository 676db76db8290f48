#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "unirec/hst/document.hpp"

namespace unirec::corpus {

// Stand-in for the TeX color-alignment labeler: every word-level token of a
// document gets a unique RGB color, a simulated renderer lays the colored
// tokens out as boxes, and labels are recovered from the boxes alone.

inline constexpr std::size_t kColorCapacity = std::size_t{1} << 24;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::uint32_t packed() const noexcept { return (std::uint32_t{r} << 16) | (std::uint32_t{g} << 8) | b; }
  static Rgb from_packed(std::uint32_t v) noexcept {
    return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
  }
  auto operator<=>(const Rgb&) const = default;
};

struct BBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  auto operator<=>(const BBox&) const = default;
};

struct ColoredGlyphBox {
  std::size_t token_index = 0;
  Rgb color;
  int page = 0;
  BBox bbox;

  bool operator==(const ColoredGlyphBox&) const = default;
};

// What the source side knows about each colored token.
struct ColorMapEntry {
  Rgb color;
  std::string surface;
  std::string leading;   // whitespace before the token in its line
  std::string trailing;  // whitespace after the last token of a line
};

class ColorMap {
 public:
  void add(ColorMapEntry entry);
  std::size_t size() const noexcept { return entries_.size(); }
  const ColorMapEntry& at(std::size_t token_index) const { return entries_.at(token_index); }
  std::optional<std::size_t> token_of(Rgb color) const;

 private:
  std::vector<ColorMapEntry> entries_;
  std::unordered_map<std::uint32_t, std::size_t> by_color_;
};

struct ColorizedDocument {
  ColorMap color_map;
  std::vector<ColoredGlyphBox> render;
};

// Layout of the simulated page.
inline constexpr int kRowPitch = 16;
inline constexpr int kGlyphHeight = 12;
inline constexpr int kRowsPerPage = 48;

/// Token i gets color i (as 24-bit RGB). Each source line becomes one box
/// row, left to right; a paragraph starts after one blank row, and rows wrap
/// onto a new page after kRowsPerPage. Throws Error when the document has
/// more than 2^24 tokens.
ColorizedDocument colorize_tokens(const hst::StructuredDocument& doc);

/// Word-level tokens `colorize_tokens` would color.
std::size_t count_tokens(const hst::StructuredDocument& doc);

struct RecoveredLabels {
  std::vector<std::string> words;
  std::vector<std::string> lines;
  std::vector<std::string> paragraphs;  // with supervision tokens

  bool operator==(const RecoveredLabels&) const = default;
};

/// Rebuilds word, line and paragraph labels from boxes in any order: boxes
/// sort by (page, row, x), rows become lines and a blank row (or a new page
/// that does not start at row 0) opens a paragraph. Throws Error naming the
/// RGB value of a box whose color is not in the map.
RecoveredLabels recover_labels(std::span<const ColoredGlyphBox> render, const ColorMap& color_map);

}  // namespace unirec::corpus
