#include "unirec/sdt/segment.hpp"

#include <array>

#include "unirec/core/error.hpp"
#include "unirec/sdt/specials.hpp"

namespace unirec::sdt {
namespace {

struct Delimiter {
  std::string_view open;
  std::string_view close;
};

// Longer openers first so "$$" wins over "$".
constexpr std::array<Delimiter, 5> kDelimiters{{
    {"$$", "$$"},
    {"$", "$"},
    {"\\(", "\\)"},
    {"\\[", "\\]"},
    {"\\begin{equation}", "\\end{equation}"},
}};

constexpr std::array<std::string_view, 3> kStrayClosers{"\\)", "\\]", "\\end{equation}"};

bool at(std::string_view s, std::size_t i, std::string_view what) {
  return s.compare(i, what.size(), what) == 0;
}

void check_reserved(std::string_view label) {
  for (std::string_view reserved : {kBos, kEos, kPad}) {
    const std::size_t pos = label.find(reserved);
    if (pos != std::string_view::npos) {
      throw ParseError("reserved token " + std::string(reserved) + " in label", pos);
    }
  }
}

// Index one past the closer of a formula opened at `start`, or npos.
std::size_t find_close(std::string_view s, std::size_t start, const Delimiter& d) {
  std::size_t j = start + d.open.size();
  while (j < s.size()) {
    if (at(s, j, d.close)) return j + d.close.size();
    j += s[j] == '\\' ? 2 : 1;
  }
  return std::string_view::npos;
}

}  // namespace

std::string SegmentedLabel::join() const {
  std::string out;
  for (const Segment& s : segments) out += s.content;
  return out;
}

SegmentedLabel segment_label(std::string_view label) {
  check_reserved(label);
  SegmentedLabel out;
  std::size_t text_start = 0;
  std::size_t i = 0;
  while (i < label.size()) {
    const char c = label[i];
    if (c != '\\' && c != '$') {
      ++i;
      continue;
    }
    const Delimiter* open = nullptr;
    for (const Delimiter& d : kDelimiters) {
      if (at(label, i, d.open)) {
        open = &d;
        break;
      }
    }
    if (!open) {
      for (std::string_view closer : kStrayClosers) {
        if (at(label, i, closer)) throw ParseError("unmatched closing delimiter '" + std::string(closer) + "'", i);
      }
      i += 2;  // escaped byte
      continue;
    }
    const std::size_t end = find_close(label, i, *open);
    if (end == std::string_view::npos) {
      throw ParseError("unbalanced delimiter '" + std::string(open->open) + "'", i);
    }
    if (i > text_start) out.segments.push_back({std::string(label.substr(text_start, i - text_start)), SpanKind::Text});
    out.segments.push_back({std::string(label.substr(i, end - i)), SpanKind::Formula});
    i = end;
    text_start = end;
  }
  if (text_start < label.size()) {
    out.segments.push_back({std::string(label.substr(text_start)), SpanKind::Text});
  }
  return out;
}

}  // namespace unirec::sdt
