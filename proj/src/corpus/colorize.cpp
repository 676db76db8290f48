#include "unirec/corpus/colorize.hpp"

#include <algorithm>
#include <tuple>

#include "unirec/core/error.hpp"
#include "unirec/core/utf8.hpp"
#include "unirec/sdt/specials.hpp"

namespace unirec::corpus {
namespace {

int width_of(std::string_view s) { return static_cast<int>(utf8::length(s)); }

std::string rgb_name(Rgb c) {
  return "(" + std::to_string(c.r) + ", " + std::to_string(c.g) + ", " + std::to_string(c.b) + ")";
}

}  // namespace

void ColorMap::add(ColorMapEntry entry) {
  if (!by_color_.emplace(entry.color.packed(), entries_.size()).second) {
    throw Error("color " + rgb_name(entry.color) + " assigned twice");
  }
  entries_.push_back(std::move(entry));
}

std::optional<std::size_t> ColorMap::token_of(Rgb color) const {
  const auto it = by_color_.find(color.packed());
  if (it == by_color_.end()) return std::nullopt;
  return it->second;
}

std::size_t count_tokens(const hst::StructuredDocument& doc) {
  std::size_t n = 0;
  for (const hst::Paragraph& para : doc.paragraphs) {
    for (const hst::Line& line : para) n += hst::count_line_words(line);
  }
  return n;
}

ColorizedDocument colorize_tokens(const hst::StructuredDocument& doc) {
  hst::validate(doc);
  const std::size_t tokens = count_tokens(doc);
  if (tokens > kColorCapacity) {
    throw Error("document has " + std::to_string(tokens) + " tokens; the RGB space holds " +
                std::to_string(kColorCapacity));
  }

  ColorizedDocument out;
  out.render.reserve(tokens);
  int page = 0;
  int row = -1;
  std::size_t index = 0;
  for (const hst::Paragraph& para : doc.paragraphs) {
    bool first_line = true;
    for (const hst::Line& line : para) {
      int next = row + (first_line ? 2 : 1);
      if (next >= kRowsPerPage) {
        ++page;
        next = first_line ? 1 : 0;
      }
      row = next;
      first_line = false;

      int x = 0;
      for (hst::Word& word : hst::line_words(line)) {
        const Rgb color = Rgb::from_packed(static_cast<std::uint32_t>(index));
        x += width_of(word.leading);
        const int x1 = x + width_of(word.surface);
        out.render.push_back({index, color, page, {x, row * kRowPitch, x1, row * kRowPitch + kGlyphHeight}});
        x = x1 + width_of(word.trailing);
        out.color_map.add({color, std::move(word.surface), std::move(word.leading), std::move(word.trailing)});
        ++index;
      }
    }
  }
  return out;
}

RecoveredLabels recover_labels(std::span<const ColoredGlyphBox> render, const ColorMap& color_map) {
  struct Placed {
    int page;
    int y;
    int x;
    std::size_t token;
  };
  std::vector<Placed> boxes;
  boxes.reserve(render.size());
  for (const ColoredGlyphBox& box : render) {
    const auto token = color_map.token_of(box.color);
    if (!token) throw Error("unknown color " + rgb_name(box.color));
    boxes.push_back({box.page, box.bbox.y0, box.bbox.x0, *token});
  }
  std::sort(boxes.begin(), boxes.end(), [](const Placed& a, const Placed& b) {
    return std::tie(a.page, a.y, a.x, a.token) < std::tie(b.page, b.y, b.x, b.token);
  });

  RecoveredLabels out;
  std::vector<std::string> para_lines;
  const auto close_paragraph = [&] {
    if (para_lines.empty()) return;
    std::string p;
    for (std::size_t i = 0; i < para_lines.size(); ++i) {
      if (i > 0) p += sdt::kLineBreak;
      p += para_lines[i];
    }
    p += sdt::kParagraphEnd;
    out.paragraphs.push_back(std::move(p));
    para_lines.clear();
  };

  std::size_t i = 0;
  int prev_page = 0;
  int prev_row = 0;
  while (i < boxes.size()) {
    const int page = boxes[i].page;
    const int y = boxes[i].y;
    const int row = y / kRowPitch;
    const bool new_paragraph = i == 0 || (page == prev_page && row - prev_row >= 2) ||
                               (page != prev_page && row >= 1);
    if (new_paragraph) close_paragraph();

    std::string line;
    for (; i < boxes.size() && boxes[i].page == page && boxes[i].y == y; ++i) {
      const ColorMapEntry& e = color_map.at(boxes[i].token);
      line += e.leading;
      line += e.surface;
      line += e.trailing;
      out.words.push_back(e.surface);
    }
    para_lines.push_back(line);
    out.lines.push_back(std::move(line));
    prev_page = page;
    prev_row = row;
  }
  close_paragraph();
  return out;
}

}  // namespace unirec::corpus
