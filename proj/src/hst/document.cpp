#include "unirec/hst/document.hpp"

#include "unirec/core/error.hpp"
#include "unirec/core/utf8.hpp"
#include "unirec/sdt/segment.hpp"
#include "unirec/sdt/specials.hpp"

namespace unirec::hst {

using nlohmann::json;

namespace {

void check_span(const Span& span, const std::string& where) {
  if (span.content.empty()) throw Error(where + ": empty span");
  for (std::string_view tok : {sdt::kLineBreak, sdt::kParagraphEnd}) {
    if (span.content.find(tok) != std::string::npos) {
      throw Error(where + ": span contains " + std::string(tok));
    }
  }
  sdt::SegmentedLabel seg;
  try {
    seg = sdt::segment_label(span.content);
  } catch (const ParseError& e) {
    throw Error(where + ": " + e.what());
  }
  if (span.kind == SpanKind::Formula) {
    if (seg.segments.size() != 1 || seg.segments[0].kind != SpanKind::Formula) {
      throw Error(where + ": formula span must be one delimited formula");
    }
  } else {
    for (const auto& s : seg.segments) {
      if (s.kind == SpanKind::Formula) throw Error(where + ": text span contains a math delimiter");
    }
  }
}

// Splits text into alternating whitespace / non-whitespace runs.
template <class Fn>
void for_each_run(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = utf8::sequence_length(text, i);
    const bool space = utf8::is_space(utf8::decode(text.substr(i, len))[0]);
    std::size_t j = i + len;
    while (j < text.size()) {
      len = utf8::sequence_length(text, j);
      if (utf8::is_space(utf8::decode(text.substr(j, len))[0]) != space) break;
      j += len;
    }
    fn(text.substr(i, j - i), space);
    i = j;
  }
}

}  // namespace

void validate(const StructuredDocument& doc) {
  if (doc.paragraphs.empty()) throw Error("empty document");
  for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
    const Paragraph& para = doc.paragraphs[p];
    const std::string pw = "paragraph " + std::to_string(p);
    if (para.empty()) throw Error(pw + ": empty paragraph");
    for (std::size_t l = 0; l < para.size(); ++l) {
      const std::string lw = pw + " line " + std::to_string(l);
      if (para[l].empty()) throw Error(lw + ": empty line");
      for (std::size_t s = 0; s < para[l].size(); ++s) {
        check_span(para[l][s], lw + " span " + std::to_string(s));
      }
    }
  }
}

std::string join_line(const Line& line) {
  std::string out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (i > 0 && line[i - 1].kind == SpanKind::Text && line[i].kind == SpanKind::Text) out += ' ';
    out += line[i].content;
  }
  return out;
}

std::size_t total_lines(const StructuredDocument& doc) {
  std::size_t n = 0;
  for (const Paragraph& p : doc.paragraphs) n += p.size();
  return n;
}

std::vector<Word> line_words(const Line& line) {
  std::vector<Word> words;
  std::string pending;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const Span& span = line[i];
    if (i > 0 && line[i - 1].kind == SpanKind::Text && span.kind == SpanKind::Text) pending += ' ';
    if (span.kind == SpanKind::Formula) {
      words.push_back({span.content, std::move(pending), {}});
      pending.clear();
      continue;
    }
    for_each_run(span.content, [&](std::string_view run, bool space) {
      if (space) {
        pending += run;
      } else {
        words.push_back({std::string(run), std::move(pending), {}});
        pending.clear();
      }
    });
  }
  if (!words.empty()) words.back().trailing = std::move(pending);
  return words;
}

std::size_t count_line_words(const Line& line) {
  std::size_t n = 0;
  for (const Span& span : line) {
    if (span.kind == SpanKind::Formula) {
      ++n;
      continue;
    }
    for_each_run(span.content, [&](std::string_view, bool space) { n += space ? 0 : 1; });
  }
  return n;
}

json to_json(const StructuredDocument& doc) {
  json paragraphs = json::array();
  for (const Paragraph& para : doc.paragraphs) {
    json lines = json::array();
    for (const Line& line : para) {
      json spans = json::array();
      for (const Span& s : line) spans.push_back({{"kind", tag_name(s.kind)}, {"content", s.content}});
      lines.push_back(std::move(spans));
    }
    paragraphs.push_back(std::move(lines));
  }
  return json{{"language", tag_name(doc.language)},
              {"domain", tag_name(doc.domain)},
              {"paragraphs", std::move(paragraphs)}};
}

StructuredDocument document_from_json(const json& j) {
  try {
    StructuredDocument doc;
    const auto lang = parse_language(j.at("language").get<std::string>());
    if (!lang) throw Error("unknown language '" + j["language"].get<std::string>() + "'");
    doc.language = *lang;
    const auto domain = parse_domain(j.at("domain").get<std::string>());
    if (!domain) throw Error("unknown domain '" + j["domain"].get<std::string>() + "'");
    doc.domain = *domain;
    for (const json& para : j.at("paragraphs")) {
      Paragraph p;
      for (const json& line : para) {
        Line l;
        for (const json& span : line) {
          const auto kind = parse_span_kind(span.at("kind").get<std::string>());
          if (!kind) throw Error("unknown span kind '" + span["kind"].get<std::string>() + "'");
          l.push_back({*kind, span.at("content").get<std::string>()});
        }
        p.push_back(std::move(l));
      }
      doc.paragraphs.push_back(std::move(p));
    }
    return doc;
  } catch (const json::exception& e) {
    throw Error(std::string("document json: ") + e.what());
  }
}

}  // namespace unirec::hst
