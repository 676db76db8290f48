#include "unirec/core/tags.hpp"

#include <string>

#include "unirec/core/error.hpp"

namespace unirec {
namespace {

std::string fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '_' || c == '-') continue;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

template <class Enum, std::size_t N>
std::optional<Enum> parse_from(std::string_view s, const std::array<Enum, N>& all) {
  const std::string key = fold(s);
  for (Enum v : all) {
    if (fold(tag_name(v)) == key || fold(display_name(v)) == key) return v;
  }
  return std::nullopt;
}

}  // namespace

std::string_view tag_name(SpanKind v) noexcept {
  return v == SpanKind::Text ? "text" : "formula";
}

std::string_view tag_name(Modality v) noexcept {
  switch (v) {
    case Modality::Text: return "text";
    case Modality::Formula: return "formula";
    case Modality::Mix: return "mix";
  }
  return "?";
}

std::string_view tag_name(HierLevel v) noexcept {
  switch (v) {
    case HierLevel::Character: return "character";
    case HierLevel::Word: return "word";
    case HierLevel::Line: return "line";
    case HierLevel::Paragraph: return "paragraph";
    case HierLevel::MultiParagraph: return "multi-paragraph";
  }
  return "?";
}

std::string_view tag_name(Language v) noexcept {
  switch (v) {
    case Language::CH: return "CH";
    case Language::EN: return "EN";
    case Language::Mix: return "Mix";
  }
  return "?";
}

std::string_view tag_name(Domain v) noexcept {
  switch (v) {
    case Domain::Book: return "book";
    case Domain::PPT2PDF: return "ppt2pdf";
    case Domain::ResearchReport: return "research_report";
    case Domain::Textbook: return "textbook";
    case Domain::ExamPaper: return "exam_paper";
    case Domain::Magazine: return "magazine";
    case Domain::Literature: return "literature";
    case Domain::Note: return "note";
    case Domain::Newspaper: return "newspaper";
  }
  return "?";
}

std::string_view display_name(Modality v) noexcept {
  switch (v) {
    case Modality::Text: return "Text";
    case Modality::Formula: return "Formula";
    case Modality::Mix: return "Mix";
  }
  return "?";
}

std::string_view display_name(HierLevel v) noexcept {
  switch (v) {
    case HierLevel::Character: return "Character";
    case HierLevel::Word: return "Word";
    case HierLevel::Line: return "Line";
    case HierLevel::Paragraph: return "Paragraph";
    case HierLevel::MultiParagraph: return "Multi-Paragraph";
  }
  return "?";
}

std::string_view display_name(Language v) noexcept { return tag_name(v); }

std::string_view display_name(Domain v) noexcept {
  switch (v) {
    case Domain::Book: return "Book";
    case Domain::PPT2PDF: return "PPT2PDF";
    case Domain::ResearchReport: return "Research Report";
    case Domain::Textbook: return "Textbook";
    case Domain::ExamPaper: return "Exam Paper";
    case Domain::Magazine: return "Magazine";
    case Domain::Literature: return "Literature";
    case Domain::Note: return "Note";
    case Domain::Newspaper: return "Newspaper";
  }
  return "?";
}

std::optional<SpanKind> parse_span_kind(std::string_view s) {
  const std::string key = fold(s);
  if (key == "text") return SpanKind::Text;
  if (key == "formula") return SpanKind::Formula;
  return std::nullopt;
}

std::optional<Modality> parse_modality(std::string_view s) { return parse_from(s, kAllModalities); }
std::optional<HierLevel> parse_level(std::string_view s) { return parse_from(s, kAllLevels); }
std::optional<Language> parse_language(std::string_view s) { return parse_from(s, kAllLanguages); }
std::optional<Domain> parse_domain(std::string_view s) { return parse_from(s, kAllDomains); }

nlohmann::json to_json(const SampleTags& tags) {
  return {{"modality", tag_name(tags.modality)},
          {"level", tag_name(tags.level)},
          {"language", tag_name(tags.language)},
          {"domain", tag_name(tags.domain)}};
}

namespace {

template <class T, class Parse>
T tag_field(const nlohmann::json& j, const char* key, Parse parse) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("missing tag '") + key + "'");
  const nlohmann::json& v = j.at(key);
  if (!v.is_string()) throw Error(std::string("tag '") + key + "' is not a string");
  const auto parsed = parse(v.get<std::string>());
  if (!parsed) throw Error(std::string("unknown ") + key + " '" + v.get<std::string>() + "'");
  return *parsed;
}

}  // namespace

SampleTags tags_from_json(const nlohmann::json& j) {
  SampleTags t;
  t.modality = tag_field<Modality>(j, "modality", parse_modality);
  t.level = tag_field<HierLevel>(j, "level", parse_level);
  t.language = tag_field<Language>(j, "language", parse_language);
  t.domain = tag_field<Domain>(j, "domain", parse_domain);
  return t;
}

}  // namespace unirec
