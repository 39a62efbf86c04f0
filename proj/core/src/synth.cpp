#include "tskan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "tskan/error.hpp"
#include "tskan/rng.hpp"
#include "tskan/spectral_features.hpp"

namespace tskan {

using nlohmann::json;

std::string to_string(EffectShape shape) {
  switch (shape) {
    case EffectShape::Linear: return "linear";
    case EffectShape::Quadratic: return "quadratic";
    case EffectShape::Sine: return "sine";
    case EffectShape::Threshold: return "threshold";
  }
  return "linear";
}

EffectShape parse_effect_shape(const std::string& text) {
  if (text == "linear") return EffectShape::Linear;
  if (text == "quadratic") return EffectShape::Quadratic;
  if (text == "sine") return EffectShape::Sine;
  if (text == "threshold") return EffectShape::Threshold;
  throw ConfigError("unknown effect shape '" + text + "' (linear|quadratic|sine|threshold)");
}

double effect_value(EffectShape shape, double z) {
  switch (shape) {
    case EffectShape::Linear: return z;
    case EffectShape::Quadratic: return 2.0 * z * z - 1.0;
    case EffectShape::Sine: return std::sin(std::numbers::pi * z);
    case EffectShape::Threshold: return z >= 0.0 ? 1.0 : -1.0;
  }
  return 0.0;
}

VariableRange variable_range(const std::string& variable) {
  // Plausible per-chunk levels for the QoE variables; anything else is [0, 1].
  if (variable == "stalling") return {0.0, 2.0, 0.5};
  if (variable == "bitrate") return {300.0, 6000.0, 1000.0};
  if (variable == "chunksize") return {2.0, 6.0, 1.0};
  if (variable == "qp") return {20.0, 45.0, 5.0};
  if (variable == "framerate") return {24.0, 30.0, 1.5};
  if (variable == "videowidth") return {480.0, 1920.0, 300.0};
  return {0.0, 1.0, 0.25};
}

namespace {

int controlled_frequencies(const SynthSpec& spec) {
  int f = 1;
  for (const auto& e : spec.effects) {
    if (const auto parsed = parse_feature_name(e.feature)) f = std::max(f, parsed->frequency);
  }
  return f;
}

}  // namespace

void SynthSpec::validate() const {
  if (samples < 3) throw ConfigError("synth needs at least 3 samples");
  if (variables.empty()) throw ConfigError("synth needs at least one variable");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ConfigError("noise_std must be >= 0");
  if (label_range && !(label_range->lo < label_range->hi)) throw ConfigError("synth label_range needs lo < hi");
  std::set<std::string> vars(variables.begin(), variables.end());
  if (vars.size() != variables.size()) throw ConfigError("duplicate synth variable names");
  const int max_f = controlled_frequencies(*this);
  if (2 * static_cast<std::size_t>(max_f) >= length) {
    throw ConfigError("series length " + std::to_string(length) + " cannot carry harmonic " + std::to_string(max_f) +
                      " (needs T > 2f)");
  }
  std::set<std::string> seen;
  for (const auto& e : effects) {
    const auto parsed = parse_feature_name(e.feature);
    if (!parsed) throw ConfigError("planted feature '" + e.feature + "' does not match M_<var>(<f>) / phi_<var>(<f>)");
    if (!vars.count(parsed->variable))
      throw ConfigError("planted feature '" + e.feature + "' names unknown variable '" + parsed->variable + "'");
    if (!seen.insert(e.feature).second) throw ConfigError("feature '" + e.feature + "' planted twice");
    if (!std::isfinite(e.magnitude)) throw ConfigError("effect magnitude must be finite");
  }
}

SynthResult generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  const std::size_t T = spec.length;
  const std::size_t V = spec.variables.size();
  const int harmonics = controlled_frequencies(spec);
  const double two_pi = 2.0 * std::numbers::pi;

  struct Target {
    std::size_t variable;
    FeatureName name;
    EffectShape shape;
    double magnitude;
  };
  std::vector<Target> targets;
  for (const auto& e : spec.effects) {
    const FeatureName n = *parse_feature_name(e.feature);
    const auto v = static_cast<std::size_t>(
        std::find(spec.variables.begin(), spec.variables.end(), n.variable) - spec.variables.begin());
    targets.push_back({v, n, e.shape, e.magnitude});
  }

  Rng rng(spec.seed);
  SynthResult result;
  result.dataset.variable_names = spec.variables;
  result.dataset.target_length = T;

  // z-variates of the current sample: [v][0] level, [v][2f-1] amplitude f, [v][2f] phase f.
  std::vector<std::vector<double>> z(V, std::vector<double>(2 * static_cast<std::size_t>(harmonics) + 1));
  std::vector<double> noise(T);
  std::size_t redraws = 0;
  constexpr std::size_t kMaxRedraws = 1000;

  for (std::size_t n = 0; n < spec.samples; ++n) {
    char id[32];
    std::snprintf(id, sizeof id, "s%06zu", n);
    TimeSeriesSample sample{id, Matrix(V, T), 0.0};
    double label = 0.0;
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxRedraws) {
        throw ConfigError("planted effects plus noise keep the label outside the label range; "
                          "reduce magnitudes or widen label_range");
      }
      for (std::size_t v = 0; v < V; ++v) {
        const VariableRange range = variable_range(spec.variables[v]);
        const double level = rng.uniform(range.level_lo, range.level_hi);
        z[v][0] = 2.0 * (level - range.level_lo) / (range.level_hi - range.level_lo) - 1.0;
        for (std::size_t t = 0; t < T; ++t) sample.values(v, t) = level;

        for (int f = 1; f <= harmonics; ++f) {
          const double amplitude = rng.uniform(0.0, range.amplitude_max);
          const double phase = std::numbers::pi - two_pi * rng.uniform();  // (-pi, pi]
          z[v][2 * static_cast<std::size_t>(f) - 1] = 2.0 * amplitude / range.amplitude_max - 1.0;
          z[v][2 * static_cast<std::size_t>(f)] = phase / std::numbers::pi;
          for (std::size_t t = 0; t < T; ++t) {
            sample.values(v, t) +=
                amplitude * std::cos(two_pi * static_cast<double>(f) * static_cast<double>(t) / static_cast<double>(T) + phase);
          }
        }

        // Noise restricted to the uncontrolled harmonics: remove its mean and
        // its components at f = 1..harmonics.
        const double noise_scale = 0.05 * (range.level_hi - range.level_lo);
        for (double& r : noise) r = noise_scale * rng.normal();
        const Spectrum spectrum = dft(noise);
        for (std::size_t t = 0; t < T; ++t) {
          double r = noise[t] - spectrum[0].real() / static_cast<double>(T);
          for (int f = 1; f <= harmonics; ++f) {
            const double angle = two_pi * static_cast<double>(f) * static_cast<double>(t) / static_cast<double>(T);
            const auto& c = spectrum[static_cast<std::size_t>(f)];
            r -= 2.0 / static_cast<double>(T) * (c.real() * std::cos(angle) - c.imag() * std::sin(angle));
          }
          sample.values(v, t) += r;
        }
      }

      label = 0.0;
      for (const auto& tg : targets) {
        const std::size_t slot = tg.name.frequency == 0 ? 0
                                 : tg.name.kind == FeatureKind::Magnitude
                                     ? 2 * static_cast<std::size_t>(tg.name.frequency) - 1
                                     : 2 * static_cast<std::size_t>(tg.name.frequency);
        label += tg.magnitude * effect_value(tg.shape, z[tg.variable][slot]);
      }
      if (spec.noise_std > 0.0) label += spec.noise_std * rng.normal();
      if (!spec.label_range || (label >= spec.label_range->lo && label <= spec.label_range->hi)) break;
      ++redraws;
    }
    sample.label = label;
    result.dataset.samples.push_back(std::move(sample));
  }

  json effects = json::array();
  for (const auto& e : spec.effects) {
    result.informative_features.push_back(e.feature);
    effects.push_back({{"feature", e.feature}, {"shape", to_string(e.shape)}, {"magnitude", e.magnitude}});
  }
  json ranges = json::object();
  for (const auto& v : spec.variables) {
    const auto r = variable_range(v);
    ranges[v] = {{"level", {r.level_lo, r.level_hi}}, {"amplitude_max", r.amplitude_max}};
  }
  result.ground_truth = json{{"informative_features", result.informative_features},
                             {"effects", effects},
                             {"noise_std", spec.noise_std},
                             {"seed", spec.seed},
                             {"N", spec.samples},
                             {"T", spec.length},
                             {"variables", spec.variables},
                             {"controlled_harmonics", harmonics},
                             {"variable_ranges", ranges},
                             {"label_redraws", redraws}};
  return result;
}

void to_json(json& j, const SynthSpec& s) {
  json effects = json::array();
  for (const auto& e : s.effects)
    effects.push_back({{"feature", e.feature}, {"shape", to_string(e.shape)}, {"magnitude", e.magnitude}});
  j = json{{"N", s.samples}, {"T", s.length}, {"variables", s.variables},
           {"noise_std", s.noise_std}, {"effects", effects}, {"seed", s.seed}};
  j["label_range"] = s.label_range ? json{s.label_range->lo, s.label_range->hi} : json(nullptr);
}

void from_json(const json& j, SynthSpec& s) {
  s.samples = j.value("N", s.samples);
  s.length = j.value("T", s.length);
  if (j.contains("variables")) {
    j.at("variables").get_to(s.variables);
  } else if (j.contains("V")) {
    const auto v = j.at("V").get<std::size_t>();
    const SynthSpec defaults;
    s.variables.clear();
    for (std::size_t i = 0; i < v; ++i)
      s.variables.push_back(i < defaults.variables.size() ? defaults.variables[i] : "var" + std::to_string(i));
  }
  s.noise_std = j.value("noise_std", s.noise_std);
  s.seed = j.value("seed", s.seed);
  if (j.contains("label_range")) {
    const auto& r = j.at("label_range");
    if (r.is_null()) {
      s.label_range.reset();
    } else {
      if (!r.is_array() || r.size() != 2) throw ConfigError("synth.label_range must be [lo, hi] or null");
      s.label_range = LabelRange{r[0].get<double>(), r[1].get<double>()};
    }
  }
  if (j.contains("effects")) {
    s.effects.clear();
    for (const auto& e : j.at("effects")) {
      s.effects.push_back({e.at("feature").get<std::string>(), parse_effect_shape(e.at("shape").get<std::string>()),
                           e.at("magnitude").get<double>()});
    }
  }
}

}  // namespace tskan
