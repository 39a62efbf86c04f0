#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tskan/timeseries_data.hpp"

namespace tskan {

enum class EffectShape { Linear, Quadratic, Sine, Threshold };

std::string to_string(EffectShape shape);
EffectShape parse_effect_shape(const std::string& text);

/// An additive contribution magnitude * g(z) of one frequency feature, where z
/// is the feature's generating variate mapped onto [-1, 1]:
///   linear z, quadratic 2z^2 - 1, sine sin(pi z), threshold sign(z) (+1 at 0).
struct PlantedEffect {
  std::string feature;
  EffectShape shape = EffectShape::Linear;
  double magnitude = 1.0;
};

double effect_value(EffectShape shape, double z);

struct SynthSpec {
  std::size_t samples = 2000;
  std::size_t length = 16;
  std::vector<std::string> variables = {"stalling", "bitrate", "chunksize", "qp", "framerate", "videowidth"};
  double noise_std = 0.1;
  std::vector<PlantedEffect> effects;
  std::uint64_t seed = 0;
  /// Samples whose label falls outside are redrawn; nullopt keeps every draw.
  std::optional<LabelRange> label_range = LabelRange{};

  /// Throws ConfigError for unknown or uncontrollable planted features.
  void validate() const;
};

/// Per-variable generating ranges: the mean level is uniform on [level_lo,
/// level_hi]; each controlled harmonic has amplitude uniform on
/// [0, amplitude_max] and phase uniform on (-pi, pi].
struct VariableRange {
  double level_lo = 0.0;
  double level_hi = 1.0;
  double amplitude_max = 0.25;
};

VariableRange variable_range(const std::string& variable);

struct SynthResult {
  Dataset dataset;
  std::vector<std::string> informative_features;
  nlohmann::json ground_truth;
};

/// Draws, per sample and variable, a level and the amplitude/phase of every
/// harmonic up to the highest planted frequency (at least 1), builds the series
/// from those components plus noise confined to the remaining frequencies, and
/// sets the label to the sum of planted effects plus Gaussian noise. A sample
/// whose label leaves spec.label_range is drawn again. The
/// frequency features of each series therefore equal the drawn components.
SynthResult generate_synthetic(const SynthSpec& spec);

void to_json(nlohmann::json& j, const SynthSpec& s);
void from_json(const nlohmann::json& j, SynthSpec& s);

}  // namespace tskan
