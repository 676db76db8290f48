#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "unirec/core/tags.hpp"

namespace unirec::corpus {

struct DataSource {
  std::string name;
  std::uint64_t pool_size = 0;
  std::vector<std::string> pool_ids;  // optional; when set its size is pool_size
  std::uint64_t epoch_target = 0;
  SampleTags tags;
};

/// Throws Error unless pool_size >= 1, epoch_target >= 1 and pool_ids is
/// empty or holds pool_size ids.
void validate(const DataSource& source);

struct PlanEntry {
  std::uint64_t item = 0;   // index into the source pool
  std::uint64_t count = 0;  // repetitions this epoch, >= 1

  bool operator==(const PlanEntry&) const = default;
};

struct SourcePlan {
  std::string name;
  std::uint64_t pool_size = 0;
  std::uint64_t epoch_target = 0;
  SampleTags tags;
  std::vector<PlanEntry> entries;  // ascending item order

  bool resampled() const noexcept { return epoch_target > pool_size; }
  std::uint64_t total() const noexcept;
  bool operator==(const SourcePlan&) const = default;
};

struct EpochPlan {
  std::uint64_t seed = 0;
  std::vector<SourcePlan> sources;

  bool operator==(const EpochPlan&) const = default;
};

/// target <= pool: `target` distinct items drawn uniformly without
/// replacement. target > pool: every item floor(target/pool) times plus
/// (target mod pool) items, drawn without replacement, once more. Each source
/// draws from its own stream derived from (seed, source position).
EpochPlan plan_epoch(std::span<const DataSource> sources, std::uint64_t seed);

struct EpochItem {
  std::size_t source = 0;
  std::uint64_t item = 0;

  bool operator==(const EpochItem&) const = default;
};

/// The plan expanded into one seeded shuffled visiting order.
std::vector<EpochItem> materialize_epoch(const EpochPlan& plan, std::uint64_t seed);

/// The fifteen sources of the UniRec40M composition, pool and per-epoch
/// counts divided by `scale` (rounded half up, at least 1).
std::vector<DataSource> unirec40m_sources(std::uint64_t scale = 1);

/// round(count / scale), half up, never below 1.
std::uint64_t scale_count(std::uint64_t count, std::uint64_t scale);

/// Manifest: a JSON list (or {"sources": [...]}) of
/// {name, pool_size | pool_file, epoch_target, tags{modality,level,language,domain}}.
/// pool_file is one id per line, relative to the manifest. Counts from
/// pool_size and epoch_target are divided by `scale`; a pool_file is not.
std::vector<DataSource> load_manifest(const std::filesystem::path& path, std::uint64_t scale = 1);
std::vector<DataSource> sources_from_json(const nlohmann::json& j, std::uint64_t scale = 1,
                                          const std::filesystem::path& base_dir = {});
nlohmann::json to_json(std::span<const DataSource> sources);

nlohmann::json to_json(const EpochPlan& plan);
EpochPlan plan_from_json(const nlohmann::json& j);

}  // namespace unirec::corpus
