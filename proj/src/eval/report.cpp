#include "unirec/eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "unirec/core/error.hpp"
#include "unirec/core/io.hpp"

namespace unirec::eval {

using nlohmann::json;

namespace {

// Scores are summed as fixed-point integers so that every permutation of the
// records gives bit-identical means.
constexpr double kFixedScale = 4611686018427387904.0;  // 2^62

using Fixed = unsigned __int128;

Fixed to_fixed(double score) { return static_cast<Fixed>(std::llround(score * kFixedScale)); }

struct Accumulator {
  Fixed sum = 0;
  std::size_t count = 0;

  void add(Fixed v) {
    sum += v;
    ++count;
  }
  GroupStat stat() const {
    if (count == 0) return {};
    return {count, static_cast<double>(sum) / kFixedScale / static_cast<double>(count)};
  }
};

template <class T, std::size_t N>
json group_json(const std::array<GroupStat, N>& stats, const std::array<T, N>& tags) {
  json out = json::array();
  for (std::size_t i = 0; i < N; ++i) {
    out.push_back({{"name", tag_name(tags[i])},
                   {"count", stats[i].count},
                   {"mean", stats[i].mean ? json(*stats[i].mean) : json(nullptr)}});
  }
  return out;
}

template <class T, std::size_t N>
void group_from_json(const json& j, std::array<GroupStat, N>& stats, const std::array<T, N>& tags) {
  if (!j.is_array() || j.size() != N) throw Error("report group has the wrong size");
  for (std::size_t i = 0; i < N; ++i) {
    if (j[i].at("name").get<std::string>() != tag_name(tags[i])) throw Error("report group out of order");
    stats[i].count = j[i].at("count").get<std::size_t>();
    const json& m = j[i].at("mean");
    stats[i].mean = m.is_null() ? std::nullopt : std::optional<double>(m.get<double>());
  }
}

std::string fixed4(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

// One block of the table: a header row and the mean/count rows.
void render_block(std::string& out, std::string_view title, const std::vector<std::string>& names,
                  const std::vector<std::string>& means, const std::vector<std::string>& counts) {
  std::vector<std::size_t> width(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    width[i] = std::max({names[i].size(), means[i].size(), counts[i].size()});
  }
  const auto row = [&](std::string_view label, const std::vector<std::string>& cells) {
    std::string line(label);
    line.resize(10, ' ');
    for (std::size_t i = 0; i < cells.size(); ++i) {
      line += "  ";
      line += std::string(width[i] - cells[i].size(), ' ');
      line += cells[i];
    }
    out += line;
    out += '\n';
  };
  out += title;
  out += '\n';
  row("", names);
  row("mean", means);
  row("count", counts);
}

template <class T, std::size_t N>
void render_group(std::string& out, std::string_view title, const std::array<GroupStat, N>& stats,
                  const std::array<T, N>& tags) {
  std::vector<std::string> names, means, counts;
  for (std::size_t i = 0; i < N; ++i) {
    names.emplace_back(display_name(tags[i]));
    means.push_back(fixed4(stats[i].mean));
    counts.push_back(std::to_string(stats[i].count));
  }
  out += '\n';
  render_block(out, title, names, means, counts);
}

}  // namespace

json to_json(const EvalRecord& r) {
  json j{{"id", r.id},
         {"gt", r.gt},
         {"pred", r.pred},
         {"tags", {{"modality", r.modality}, {"level", r.level}, {"language", r.language}, {"domain", r.domain}}}};
  if (r.degenerate) j["degenerate"] = true;
  return j;
}

ParsedRecords parse_eval_records(std::string_view jsonl) {
  ParsedRecords out;
  std::size_t line_no = 0;
  for (const std::string& line : io::split_lines(jsonl)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      out.rejected.push_back({where, std::string("invalid json: ") + e.what()});
      continue;
    }
    if (io::is_jsonl_header(j)) continue;
    if (!j.is_object()) {
      out.rejected.push_back({where, "record is not an object"});
      continue;
    }
    const std::string id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : where;
    const auto field = [&](const json& obj, const char* key) -> std::optional<std::string> {
      if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_string()) return std::nullopt;
      return obj.at(key).get<std::string>();
    };
    std::string missing;
    const auto take = [&](const json& obj, const char* key, std::string& dst) {
      const auto v = field(obj, key);
      if (v) {
        dst = *v;
      } else if (missing.empty()) {
        missing = key;
      }
    };
    EvalRecord r;
    take(j, "id", r.id);
    take(j, "gt", r.gt);
    take(j, "pred", r.pred);
    const json tags = j.contains("tags") ? j.at("tags") : json();
    take(tags, "modality", r.modality);
    take(tags, "level", r.level);
    take(tags, "language", r.language);
    take(tags, "domain", r.domain);
    if (j.contains("degenerate")) {
      if (!j.at("degenerate").is_boolean()) {
        out.rejected.push_back({id, "'degenerate' must be a boolean"});
        continue;
      }
      r.degenerate = j.at("degenerate").get<bool>();
    }
    if (!missing.empty()) {
      out.rejected.push_back({id, "missing or non-string '" + missing + "'"});
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

EvalReport evaluate(std::span<const EvalRecord> records, ScoreMode mode, std::vector<Rejection> prior) {
  if (records.empty() && prior.empty()) throw Error("no records");
  EvalReport report;
  report.mode = mode;
  report.rejected = std::move(prior);

  std::array<Accumulator, kAllModalities.size()> modality{};
  std::array<Accumulator, kAllLevels.size()> level{};
  std::array<Accumulator, kAllLanguages.size()> language{};
  std::array<Accumulator, kAllDomains.size()> domain{};

  for (const EvalRecord& r : records) {
    const auto m = parse_modality(r.modality);
    const auto l = parse_level(r.level);
    const auto g = parse_language(r.language);
    const auto d = parse_domain(r.domain);
    std::string reason;
    if (!m) reason = "unknown modality '" + r.modality + "'";
    else if (!l) reason = "unknown level '" + r.level + "'";
    else if (!g) reason = "unknown language '" + r.language + "'";
    else if (!d) reason = "unknown domain '" + r.domain + "'";
    else if (r.gt.empty() && !r.degenerate) reason = "empty gt not flagged degenerate";
    if (!reason.empty()) {
      report.rejected.push_back({r.id, std::move(reason)});
      continue;
    }
    const Fixed score = to_fixed(normalized_ed(canonicalize(r.gt, mode), canonicalize(r.pred, mode)));
    modality[index_of(*m)].add(score);
    level[index_of(*l)].add(score);
    language[index_of(*g)].add(score);
    domain[index_of(*d)].add(score);
    ++report.records;
  }

  for (std::size_t i = 0; i < modality.size(); ++i) report.modality[i] = modality[i].stat();
  for (std::size_t i = 0; i < level.size(); ++i) report.level[i] = level[i].stat();
  for (std::size_t i = 0; i < language.size(); ++i) report.language[i] = language[i].stat();
  for (std::size_t i = 0; i < domain.size(); ++i) report.domain[i] = domain[i].stat();

  double total = 0.0;
  std::size_t groups = 0;
  for (const GroupStat& s : report.modality) {
    if (s.mean) {
      total += *s.mean;
      ++groups;
    }
  }
  if (groups > 0) report.avg = total / static_cast<double>(groups);
  std::sort(report.rejected.begin(), report.rejected.end());
  return report;
}

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "table") return ReportFormat::Table;
  if (s == "json") return ReportFormat::Json;
  return std::nullopt;
}

json to_json(const EvalReport& report) {
  json rejected = json::array();
  for (const Rejection& r : report.rejected) rejected.push_back({{"id", r.id}, {"reason", r.reason}});
  return {{"schema", kReportSchema},
          {"version", kReportVersion},
          {"mode", mode_name(report.mode)},
          {"records", report.records},
          {"avg", report.avg ? json(*report.avg) : json(nullptr)},
          {"modality", group_json(report.modality, kAllModalities)},
          {"level", group_json(report.level, kAllLevels)},
          {"language", group_json(report.language, kAllLanguages)},
          {"domain", group_json(report.domain, kAllDomains)},
          {"rejected_count", report.rejected.size()},
          {"rejected", std::move(rejected)}};
}

EvalReport report_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) throw Error("not an eval report");
    if (j.at("version").get<int>() != kReportVersion) {
      throw Error("unsupported eval report version " + std::to_string(j.at("version").get<int>()));
    }
    EvalReport report;
    const auto mode = parse_score_mode(j.at("mode").get<std::string>());
    if (!mode) throw Error("unknown score mode");
    report.mode = *mode;
    report.records = j.at("records").get<std::size_t>();
    report.avg = j.at("avg").is_null() ? std::nullopt : std::optional<double>(j.at("avg").get<double>());
    group_from_json(j.at("modality"), report.modality, kAllModalities);
    group_from_json(j.at("level"), report.level, kAllLevels);
    group_from_json(j.at("language"), report.language, kAllLanguages);
    group_from_json(j.at("domain"), report.domain, kAllDomains);
    for (const json& r : j.at("rejected")) {
      report.rejected.push_back({r.at("id").get<std::string>(), r.at("reason").get<std::string>()});
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(std::string("eval report json: ") + e.what());
  }
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(report).dump(2) + "\n";

  std::string out = "mode " + std::string(mode_name(report.mode)) + ", " + std::to_string(report.records) +
                    " records, " + std::to_string(report.rejected.size()) + " rejected\n";

  std::vector<std::string> names{"Avg"}, means{fixed4(report.avg)}, counts{std::to_string(report.records)};
  for (std::size_t i = 0; i < kAllModalities.size(); ++i) {
    names.emplace_back(display_name(kAllModalities[i]));
    means.push_back(fixed4(report.modality[i].mean));
    counts.push_back(std::to_string(report.modality[i].count));
  }
  out += '\n';
  render_block(out, "Modality", names, means, counts);
  render_group(out, "Level", report.level, kAllLevels);
  render_group(out, "Language", report.language, kAllLanguages);
  render_group(out, "Domain", report.domain, kAllDomains);

  if (!report.rejected.empty()) {
    out += "\nRejected\n";
    for (const Rejection& r : report.rejected) out += "  " + r.id + ": " + r.reason + "\n";
  }
  return out;
}

}  // namespace unirec::eval
