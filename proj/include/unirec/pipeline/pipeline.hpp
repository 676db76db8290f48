#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unirec/core/error.hpp"
#include "unirec/core/tags.hpp"
#include "unirec/corpus/generator.hpp"
#include "unirec/eval/edit_distance.hpp"

namespace unirec::pipeline {

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::size_t documents = 40;
  corpus::GeneratorProfile profile;
  std::vector<HierLevel> levels{std::begin(kAllLevels), std::end(kAllLevels)};
  std::size_t text_vocab_size = 600;
  std::size_t formula_vocab_size = 400;
  std::size_t coupled_vocab_size = 800;
  std::size_t max_len = 1024;
  std::optional<std::filesystem::path> manifest;  // built-in source table when unset
  std::uint64_t scale = 1000;
  eval::ScoreMode mode = eval::ScoreMode::Hst;
  double mock_error_rate = 0.05;
};

// Raised for configs that fail validation before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A stage failed after work started; partial artifacts have been removed.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Reads a config file. Relative paths inside it (profile, manifest,
/// out_dir) resolve against the config's directory. Throws ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// UNIREC_SEED, when set, replaces the config seed. Throws ConfigError on a
/// value that is not an unsigned integer.
void apply_env_overrides(PipelineConfig& config);

/// Checks every input path and setting. Throws ConfigError.
void validate(const PipelineConfig& config);

struct PipelineResult {
  nlohmann::json summary;
  std::vector<std::filesystem::path> artifacts;  // relative to out_dir, sorted
};

/// gen -> tokenize -> labels -> filter -> plan -> decode -> eval. Stages talk
/// only through the files they write. Everything is built in a staging
/// directory under out_dir and moved into place at the end; on failure the
/// staging directory is removed and StageError names the stage.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace unirec::pipeline
