#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "unirec/core/tags.hpp"

namespace unirec::hst {

struct Span {
  SpanKind kind = SpanKind::Text;
  std::string content;  // Formula spans include their math delimiters

  bool operator==(const Span&) const = default;
};

using Line = std::vector<Span>;
using Paragraph = std::vector<Line>;

// paragraphs -> lines -> spans, plus language and domain metadata.
struct StructuredDocument {
  std::vector<Paragraph> paragraphs;
  Language language = Language::EN;
  Domain domain = Domain::Book;

  bool operator==(const StructuredDocument&) const = default;
};

/// Throws Error unless: the document, every paragraph and every line are
/// non-empty; no span is empty or contains "<|ln|>"/"<|pn|>"; each Formula
/// span is exactly one delimited formula and each Text span has none.
void validate(const StructuredDocument& doc);

/// Spans of one line: a single space between adjacent Text spans, nothing
/// injected next to a Formula span.
std::string join_line(const Line& line);

std::size_t total_lines(const StructuredDocument& doc);

// A word of a line: a whitespace-delimited run of a Text span or a whole
// Formula span. `leading` holds the whitespace before it; the last word also
// carries the line's trailing whitespace, so concatenating
// leading + surface + trailing over all words reproduces `join_line`.
struct Word {
  std::string surface;
  std::string leading;
  std::string trailing;
};

std::vector<Word> line_words(const Line& line);

/// line_words(line).size() without building the words.
std::size_t count_line_words(const Line& line);

nlohmann::json to_json(const StructuredDocument& doc);
StructuredDocument document_from_json(const nlohmann::json& j);

}  // namespace unirec::hst
