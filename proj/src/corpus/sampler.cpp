#include "unirec/corpus/sampler.hpp"

#include <array>

#include "unirec/core/error.hpp"
#include "unirec/core/io.hpp"
#include "unirec/core/rng.hpp"

namespace unirec::corpus {

using nlohmann::json;

namespace {

// Draws k of n indices uniformly without replacement, ascending (selection
// sampling: each index is kept with probability needed/remaining).
std::vector<std::uint64_t> select_without_replacement(Rng& rng, std::uint64_t n, std::uint64_t k) {
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < n && out.size() < k; ++i) {
    if (rng.below(n - i) < k - out.size()) out.push_back(i);
  }
  return out;
}

struct BuiltinSource {
  const char* name;
  std::uint64_t pool_hundredths;    // millions x 100
  std::uint64_t target_hundredths;  // millions x 100
  SampleTags tags;
};

using M = Modality;
using L = HierLevel;
using G = Language;
using D = Domain;

constexpr std::array<BuiltinSource, 15> kUniRec40M{{
    {"En-Text", 905, 168, {M::Text, L::Paragraph, G::EN, D::Literature}},
    {"En-Formula", 1285, 257, {M::Formula, L::Line, G::EN, D::Literature}},
    {"En-Mixed", 791, 64, {M::Mix, L::Paragraph, G::EN, D::Literature}},
    {"Ch-Text", 684, 186, {M::Text, L::Paragraph, G::CH, D::Book}},
    {"Ch-Formula", 5, 5, {M::Formula, L::Line, G::CH, D::Book}},
    {"Ch-Mixed", 24, 24, {M::Mix, L::Paragraph, G::CH, D::Book}},
    {"LSVT", 26, 130, {M::Text, L::Line, G::CH, D::Magazine}},
    {"MTWI", 15, 103, {M::Text, L::Line, G::CH, D::Magazine}},
    {"HierText", 105, 32, {M::Text, L::Line, G::EN, D::Magazine}},
    {"HWDB", 38, 113, {M::Text, L::Line, G::CH, D::Note}},
    {"TAL", 2, 20, {M::Formula, L::Line, G::CH, D::Note}},
    {"Note", 8, 41, {M::Mix, L::Paragraph, G::Mix, D::Note}},
    {"IR Report", 35, 70, {M::Text, L::Paragraph, G::CH, D::ResearchReport}},
    {"Newspaper", 13, 25, {M::Text, L::Paragraph, G::CH, D::Newspaper}},
    {"K-12", 25, 25, {M::Mix, L::Paragraph, G::CH, D::ExamPaper}},
}};

std::uint64_t count_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(where + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw Error(where + ": '" + key + "' must be a positive integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

void validate(const DataSource& source) {
  const std::string where = "source '" + source.name + "'";
  if (source.pool_size < 1) throw Error(where + ": pool_size must be >= 1");
  if (source.epoch_target < 1) throw Error(where + ": epoch_target must be >= 1");
  if (!source.pool_ids.empty() && source.pool_ids.size() != source.pool_size) {
    throw Error(where + ": pool_ids and pool_size disagree");
  }
}

std::uint64_t SourcePlan::total() const noexcept {
  std::uint64_t n = 0;
  for (const PlanEntry& e : entries) n += e.count;
  return n;
}

EpochPlan plan_epoch(std::span<const DataSource> sources, std::uint64_t seed) {
  EpochPlan plan;
  plan.seed = seed;
  plan.sources.reserve(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const DataSource& src = sources[s];
    validate(src);
    Rng rng(mix_seed(seed, s));
    SourcePlan sp{src.name, src.pool_size, src.epoch_target, src.tags, {}};
    const std::uint64_t pool = src.pool_size;
    const std::uint64_t target = src.epoch_target;
    if (target <= pool) {
      for (std::uint64_t item : select_without_replacement(rng, pool, target)) sp.entries.push_back({item, 1});
    } else {
      const std::uint64_t base = target / pool;
      const std::vector<std::uint64_t> extra = select_without_replacement(rng, pool, target % pool);
      sp.entries.reserve(pool);
      std::size_t next = 0;
      for (std::uint64_t item = 0; item < pool; ++item) {
        std::uint64_t count = base;
        if (next < extra.size() && extra[next] == item) {
          ++count;
          ++next;
        }
        sp.entries.push_back({item, count});
      }
    }
    plan.sources.push_back(std::move(sp));
  }
  return plan;
}

std::vector<EpochItem> materialize_epoch(const EpochPlan& plan, std::uint64_t seed) {
  std::vector<EpochItem> items;
  for (std::size_t s = 0; s < plan.sources.size(); ++s) {
    for (const PlanEntry& e : plan.sources[s].entries) {
      for (std::uint64_t r = 0; r < e.count; ++r) items.push_back({s, e.item});
    }
  }
  Rng rng(seed);
  rng.shuffle(items);
  return items;
}

std::uint64_t scale_count(std::uint64_t count, std::uint64_t scale) {
  if (scale == 0) throw Error("scale must be >= 1");
  const std::uint64_t q = count / scale;
  const std::uint64_t r = count % scale;
  const std::uint64_t rounded = q + (r >= scale - r ? 1 : 0);
  return rounded < 1 ? 1 : rounded;
}

std::vector<DataSource> unirec40m_sources(std::uint64_t scale) {
  std::vector<DataSource> out;
  for (const BuiltinSource& b : kUniRec40M) {
    out.push_back({b.name, scale_count(b.pool_hundredths * 10'000, scale), {},
                   scale_count(b.target_hundredths * 10'000, scale), b.tags});
  }
  return out;
}

std::vector<DataSource> sources_from_json(const json& j, std::uint64_t scale,
                                          const std::filesystem::path& base_dir) {
  const json* list = &j;
  if (j.is_object() && j.contains("sources")) list = &j.at("sources");
  if (!list->is_array()) throw Error("manifest must be a list of sources");
  std::vector<DataSource> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& e = (*list)[i];
    std::string where = "manifest entry " + std::to_string(i);
    if (!e.is_object()) throw Error(where + ": not an object");
    if (!e.contains("name") || !e.at("name").is_string()) throw Error(where + ": missing 'name'");
    DataSource src;
    src.name = e.at("name").get<std::string>();
    where = "source '" + src.name + "'";
    if (e.contains("pool_file")) {
      if (!e.at("pool_file").is_string()) throw Error(where + ": 'pool_file' must be a path");
      const std::filesystem::path file = base_dir / e.at("pool_file").get<std::string>();
      for (std::string& line : io::split_lines(io::read_file(file))) {
        if (!line.empty()) src.pool_ids.push_back(std::move(line));
      }
      src.pool_size = src.pool_ids.size();
      if (src.pool_size == 0) throw Error(where + ": pool file " + file.string() + " is empty");
    } else {
      src.pool_size = scale_count(count_field(e, "pool_size", where), scale);
    }
    src.epoch_target = scale_count(count_field(e, "epoch_target", where), scale);
    try {
      src.tags = tags_from_json(e.contains("tags") ? e.at("tags") : json::object());
    } catch (const Error& err) {
      throw Error(where + ": " + err.what());
    }
    validate(src);
    out.push_back(std::move(src));
  }
  return out;
}

std::vector<DataSource> load_manifest(const std::filesystem::path& path, std::uint64_t scale) {
  return sources_from_json(io::read_json(path), scale, path.parent_path());
}

json to_json(std::span<const DataSource> sources) {
  json out = json::array();
  for (const DataSource& s : sources) {
    out.push_back({{"name", s.name},
                   {"pool_size", s.pool_size},
                   {"epoch_target", s.epoch_target},
                   {"tags", to_json(s.tags)}});
  }
  return out;
}

json to_json(const EpochPlan& plan) {
  json sources = json::array();
  for (const SourcePlan& sp : plan.sources) {
    json entries = json::array();
    for (const PlanEntry& e : sp.entries) entries.push_back({e.item, e.count});
    sources.push_back({{"name", sp.name},
                       {"pool_size", sp.pool_size},
                       {"epoch_target", sp.epoch_target},
                       {"mode", sp.resampled() ? "resample" : "subsample"},
                       {"tags", to_json(sp.tags)},
                       {"entries", std::move(entries)}});
  }
  return {{"kind", "epoch_plan"}, {"version", 1}, {"seed", plan.seed}, {"sources", std::move(sources)}};
}

EpochPlan plan_from_json(const json& j) {
  try {
    if (j.at("kind") != "epoch_plan") throw Error("not an epoch plan");
    EpochPlan plan;
    plan.seed = j.at("seed").get<std::uint64_t>();
    for (const json& s : j.at("sources")) {
      SourcePlan sp;
      sp.name = s.at("name").get<std::string>();
      sp.pool_size = s.at("pool_size").get<std::uint64_t>();
      sp.epoch_target = s.at("epoch_target").get<std::uint64_t>();
      sp.tags = tags_from_json(s.at("tags"));
      for (const json& e : s.at("entries")) sp.entries.push_back({e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>()});
      plan.sources.push_back(std::move(sp));
    }
    return plan;
  } catch (const json::exception& e) {
    throw Error(std::string("epoch plan json: ") + e.what());
  }
}

}  // namespace unirec::corpus
