#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "unirec/core/tags.hpp"
#include "unirec/eval/edit_distance.hpp"

namespace unirec::eval {

// Tags stay strings until evaluation so that bad values are rejected per
// record instead of failing the whole stream.
struct EvalRecord {
  std::string id;
  std::string gt;
  std::string pred;
  std::string modality;
  std::string level;
  std::string language;
  std::string domain;
  bool degenerate = false;  // allows an empty gt

  bool operator==(const EvalRecord&) const = default;
};

struct Rejection {
  std::string id;
  std::string reason;

  auto operator<=>(const Rejection&) const = default;
};

nlohmann::json to_json(const EvalRecord& record);

/// Parses `{"id","gt","pred","tags":{...},"degenerate"?}`. Structural
/// problems (not an object, missing or non-string fields) are returned as a
/// Rejection; tag values are checked later by `evaluate`.
struct ParsedRecords {
  std::vector<EvalRecord> records;
  std::vector<Rejection> rejected;
};
ParsedRecords parse_eval_records(std::string_view jsonl);

struct GroupStat {
  std::size_t count = 0;
  std::optional<double> mean;  // empty when no record falls in the group

  bool operator==(const GroupStat&) const = default;
};

struct EvalReport {
  ScoreMode mode = ScoreMode::Hst;
  std::size_t records = 0;  // scored records
  std::optional<double> avg;  // mean of the modality means that exist
  std::array<GroupStat, kAllModalities.size()> modality{};
  std::array<GroupStat, kAllLevels.size()> level{};
  std::array<GroupStat, kAllLanguages.size()> language{};
  std::array<GroupStat, kAllDomains.size()> domain{};
  std::vector<Rejection> rejected;  // sorted

  bool operator==(const EvalReport&) const = default;
};

/// Scores normalized_ed(canonicalize(gt), canonicalize(pred)) per record and
/// averages per group (macro over records). Records with unknown tags or an
/// unflagged empty gt are rejected with a reason; `prior` rejections (from
/// parsing) are carried into the report. The result does not depend on
/// record order. Throws Error("no records") when there is nothing at all.
EvalReport evaluate(std::span<const EvalRecord> records, ScoreMode mode, std::vector<Rejection> prior = {});

enum class ReportFormat { Table, Json };
std::optional<ReportFormat> parse_report_format(std::string_view s);

inline constexpr std::string_view kReportSchema = "unirec.eval_report";
inline constexpr int kReportVersion = 1;

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

/// Table columns: modality (Avg, Text, Formula, Mix), level (Character to
/// Multi-Paragraph), language (CH, EN, Mix), domain (Book to Newspaper).
std::string render_report(const EvalReport& report, ReportFormat format);

}  // namespace unirec::eval
