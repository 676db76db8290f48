#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include <json.hpp>

namespace unirec {

// Closed tag vocabularies shared by the corpus, the sampler and the
// benchmark harness. `tag_name` is the canonical JSON spelling and
// `display_name` the report column header.

enum class SpanKind { Text, Formula };

enum class Modality { Text, Formula, Mix };

// Granularity of a sample; the enumerators are ordered.
enum class HierLevel { Character, Word, Line, Paragraph, MultiParagraph };

enum class Language { CH, EN, Mix };

enum class Domain {
  Book,
  PPT2PDF,
  ResearchReport,
  Textbook,
  ExamPaper,
  Magazine,
  Literature,
  Note,
  Newspaper,
};

inline constexpr std::array kAllModalities{Modality::Text, Modality::Formula, Modality::Mix};
inline constexpr std::array kAllLevels{HierLevel::Character, HierLevel::Word, HierLevel::Line,
                                       HierLevel::Paragraph, HierLevel::MultiParagraph};
inline constexpr std::array kAllLanguages{Language::CH, Language::EN, Language::Mix};
inline constexpr std::array kAllDomains{
    Domain::Book,     Domain::PPT2PDF,    Domain::ResearchReport,
    Domain::Textbook, Domain::ExamPaper,  Domain::Magazine,
    Domain::Literature, Domain::Note,     Domain::Newspaper,
};

std::string_view tag_name(SpanKind v) noexcept;
std::string_view tag_name(Modality v) noexcept;
std::string_view tag_name(HierLevel v) noexcept;
std::string_view tag_name(Language v) noexcept;
std::string_view tag_name(Domain v) noexcept;

std::string_view display_name(Modality v) noexcept;
std::string_view display_name(HierLevel v) noexcept;
std::string_view display_name(Language v) noexcept;
std::string_view display_name(Domain v) noexcept;

// Parsers are case-insensitive and ignore ' ', '_' and '-', so
// "Multi-Paragraph", "multi_paragraph" and "multiparagraph" all match.
std::optional<SpanKind> parse_span_kind(std::string_view s);
std::optional<Modality> parse_modality(std::string_view s);
std::optional<HierLevel> parse_level(std::string_view s);
std::optional<Language> parse_language(std::string_view s);
std::optional<Domain> parse_domain(std::string_view s);

constexpr std::size_t index_of(Modality v) noexcept { return static_cast<std::size_t>(v); }
constexpr std::size_t index_of(HierLevel v) noexcept { return static_cast<std::size_t>(v); }
constexpr std::size_t index_of(Language v) noexcept { return static_cast<std::size_t>(v); }
constexpr std::size_t index_of(Domain v) noexcept { return static_cast<std::size_t>(v); }

struct SampleTags {
  Modality modality = Modality::Text;
  HierLevel level = HierLevel::Line;
  Language language = Language::EN;
  Domain domain = Domain::Book;

  bool operator==(const SampleTags&) const = default;
};

/// {"modality","level","language","domain"} with canonical tag names.
nlohmann::json to_json(const SampleTags& tags);
/// Throws Error naming the first missing or unknown field.
SampleTags tags_from_json(const nlohmann::json& j);

}  // namespace unirec
