#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tskan/baselines.hpp"
#include "tskan/explain_export.hpp"
#include "tskan/selection_pipeline.hpp"
#include "tskan/synth.hpp"
#include "tskan/timeseries_data.hpp"

namespace tskan::cli {

struct DataConfig {
  std::string path;
  /// Empty: every non-key column of the CSV header.
  std::vector<std::string> variables;
  /// 0 keeps the loaded length (samples must then agree on T).
  std::size_t max_length = 0;
  LengthPolicy length_policy = LengthPolicy::Drop;
  std::optional<LabelRange> label_range = LabelRange{};
};

struct BaselineConfig {
  BaselineFeatures features = BaselineFeatures::Frequency;
  double lasso_lambda = 1.0;
  double lasso_tol = 1e-10;
  std::size_t lasso_max_iter = 100000;
};

struct ExplainConfig {
  std::size_t n_points = 200;
  RangePolicy range = RangePolicy::Data;
  std::vector<double> phases = {0.0, 1.57, -1.57, 3.14159};
};

/// Everything a command may need. One file format serves all commands;
/// sections a command does not use are ignored.
struct CliConfig {
  std::optional<std::uint64_t> seed;
  DataConfig data;
  SynthSpec synth;
  PipelineConfig pipeline;
  BaselineConfig baselines;
  ExplainConfig explain;
};

/// Throws ConfigError on unreadable files, malformed JSON or bad values.
CliConfig load_config(const std::string& path);
CliConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const CliConfig& c);

enum class SeedSource { Flag, Config, Environment, Default };

std::string to_string(SeedSource source);

struct ResolvedSeed {
  std::uint64_t value = 0;
  SeedSource source = SeedSource::Default;
};

/// flag > config > TSKAN_SEED > 0. A malformed TSKAN_SEED is a ConfigError.
ResolvedSeed resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config,
                          const char* env_value);

/// Sub-seeds of the master seed: the split uses the seed itself, stage 1 and
/// stage 2 initialization use derived streams 1 and 2.
void apply_seed(CliConfig& config, std::uint64_t seed);

}  // namespace tskan::cli
