#include "unirec/hst/codec.hpp"

#include "unirec/core/rng.hpp"
#include "unirec/core/utf8.hpp"
#include "unirec/sdt/specials.hpp"

namespace unirec::hst {
namespace {

using sdt::kLineBreak;
using sdt::kParagraphEnd;

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void append_paragraph(std::string& out, const Paragraph& para) {
  for (std::size_t l = 0; l < para.size(); ++l) {
    if (l > 0) out += kLineBreak;
    out += join_line(para[l]);
  }
  out += kParagraphEnd;
}

std::string encode_paragraphs(const StructuredDocument& doc, std::size_t first, std::size_t count) {
  std::string out;
  for (std::size_t p = first; p < first + count; ++p) append_paragraph(out, doc.paragraphs[p]);
  return out;
}

void trim_trailing_space(std::string& s) {
  std::size_t keep = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t len = utf8::sequence_length(s, i);
    if (!utf8::is_space(utf8::decode(std::string_view(s).substr(i, len))[0])) keep = i + len;
    i += len;
  }
  s.resize(keep);
}

}  // namespace

std::string encode_hst(const StructuredDocument& doc) {
  validate(doc);
  return encode_paragraphs(doc, 0, doc.paragraphs.size());
}

std::string decode_hst(std::string_view pred) {
  // Deleting on the fly: any <|ln|> completed by a later byte is removed too.
  std::string no_ln;
  no_ln.reserve(pred.size());
  for (char c : pred) {
    no_ln.push_back(c);
    if (ends_with(no_ln, kLineBreak)) no_ln.resize(no_ln.size() - kLineBreak.size());
  }
  std::string out;
  out.reserve(no_ln.size());
  std::size_t pos = 0;
  for (;;) {
    const std::size_t hit = no_ln.find(kParagraphEnd, pos);
    if (hit == std::string::npos) break;
    out.append(no_ln, pos, hit - pos);
    out += "\n\n";
    pos = hit + kParagraphEnd.size();
  }
  out.append(no_ln, pos);
  trim_trailing_space(out);
  return out;
}

std::string strip_hst(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  bool removed = false;
  for (char c : label) {
    if (removed) {
      removed = false;
      if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    }
    out.push_back(c);
    if (ends_with(out, kLineBreak) || ends_with(out, kParagraphEnd)) {
      out.resize(out.size() - kLineBreak.size());
      removed = true;
    }
  }
  return out;
}

std::vector<LevelSample> derive_levels(const StructuredDocument& doc, HierLevel level,
                                       std::uint64_t seed) {
  validate(doc);
  std::vector<LevelSample> out;
  const auto emit = [&](std::string label) { out.push_back({std::move(label), level}); };

  switch (level) {
    case HierLevel::Character:
      for (const Paragraph& para : doc.paragraphs) {
        for (const Line& line : para) {
          for (const Span& span : line) {
            if (span.kind != SpanKind::Text) continue;
            for (char32_t cp : utf8::decode(span.content)) {
              if (!utf8::is_space(cp)) emit(utf8::encode(std::u32string_view(&cp, 1)));
            }
          }
        }
      }
      break;
    case HierLevel::Word:
      for (const Paragraph& para : doc.paragraphs) {
        for (const Line& line : para) {
          for (Word& w : line_words(line)) emit(std::move(w.surface));
        }
      }
      break;
    case HierLevel::Line:
      for (const Paragraph& para : doc.paragraphs) {
        for (const Line& line : para) emit(join_line(line));
      }
      break;
    case HierLevel::Paragraph:
      for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) emit(encode_paragraphs(doc, p, 1));
      break;
    case HierLevel::MultiParagraph: {
      const std::size_t total = doc.paragraphs.size();
      if (total < 2) break;
      Rng rng(seed);
      std::size_t first = 0;
      while (first < total) {
        const std::size_t remaining = total - first;
        // Runs of 2..3 while at least 5 remain, so no run of 1 is left over.
        const std::size_t run = remaining <= 4 ? remaining : static_cast<std::size_t>(rng.between(2, 3));
        emit(encode_paragraphs(doc, first, run));
        first += run;
      }
      break;
    }
  }
  return out;
}

}  // namespace unirec::hst
