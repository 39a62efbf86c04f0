#include "tskan/spectral_features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "tskan/error.hpp"

namespace tskan {

Spectrum dft(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n == 0) throw DataError("dft of an empty series");
  for (const double v : series)
    if (!std::isfinite(v)) throw DataError("dft input contains a non-finite value");

  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  twiddle[0] = {1.0, 0.0};

  Spectrum out(n);
  for (std::size_t f = 0; f < n; ++f) {
    std::complex<double> acc{0.0, 0.0};
    std::size_t k = 0;  // (f * t) mod n
    for (std::size_t t = 0; t < n; ++t) {
      acc += series[t] * twiddle[k];
      k += f;
      if (k >= n) k -= n;
    }
    out[f] = acc;
  }
  return out;
}

SpectralComponents extract_components(const Spectrum& spectrum, int max_frequency) {
  const auto n = static_cast<int>(spectrum.size());
  if (n == 0) throw DataError("empty spectrum");
  if (max_frequency < 0 || max_frequency > n / 2) {
    throw DataError("frequency cutoff F=" + std::to_string(max_frequency) + " outside [0, " +
                    std::to_string(n / 2) + "] for T=" + std::to_string(n));
  }
  if (std::abs(spectrum[0].imag()) >= 1e-9)
    throw DataError("DC coefficient has a non-zero imaginary part; input was not real");

  SpectralComponents out;
  out.dc = spectrum[0].real();
  for (int f = 1; f <= max_frequency; ++f) {
    const auto& x = spectrum[static_cast<std::size_t>(f)];
    const double mag = std::abs(x);
    double phase = 0.0;
    if (mag >= kPhaseMagnitudeFloor) {
      phase = std::atan2(x.imag(), x.real());
      if (phase <= -std::numbers::pi) phase = std::numbers::pi;
    }
    out.magnitudes.push_back(mag);
    out.phases.push_back(phase);
  }
  return out;
}

std::string FeatureName::str() const {
  return (kind == FeatureKind::Magnitude ? "M_" : "phi_") + variable + "(" + std::to_string(frequency) + ")";
}

std::optional<FeatureName> parse_feature_name(std::string_view name) {
  FeatureName out;
  if (name.starts_with("M_")) {
    out.kind = FeatureKind::Magnitude;
    name.remove_prefix(2);
  } else if (name.starts_with("phi_")) {
    out.kind = FeatureKind::Phase;
    name.remove_prefix(4);
  } else {
    return std::nullopt;
  }
  const auto open = name.rfind('(');
  if (open == std::string_view::npos || open == 0 || !name.ends_with(")")) return std::nullopt;
  const std::string_view digits = name.substr(open + 1, name.size() - open - 2);
  if (digits.empty()) return std::nullopt;
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), out.frequency);
  if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size() || out.frequency < 0) return std::nullopt;
  if (out.kind == FeatureKind::Phase && out.frequency == 0) return std::nullopt;
  out.variable = std::string(name.substr(0, open));
  return out;
}

std::vector<std::string> feature_names(const std::vector<std::string>& variables, int max_frequency) {
  std::vector<std::string> names;
  names.reserve(variables.size() * static_cast<std::size_t>(2 * max_frequency + 1));
  for (const auto& v : variables) {
    names.push_back(FeatureName{FeatureKind::Magnitude, v, 0}.str());
    for (int f = 1; f <= max_frequency; ++f) {
      names.push_back(FeatureName{FeatureKind::Magnitude, v, f}.str());
      names.push_back(FeatureName{FeatureKind::Phase, v, f}.str());
    }
  }
  return names;
}

FrequencyFeatureVector build_feature_vector(const TimeSeriesSample& sample,
                                            const std::vector<std::string>& variables,
                                            int max_frequency) {
  if (sample.variables() != variables.size()) {
    throw DataError("sample '" + sample.sample_id + "' has " + std::to_string(sample.variables()) +
                    " variables, schema has " + std::to_string(variables.size()));
  }
  FrequencyFeatureVector out;
  out.max_frequency = max_frequency;
  out.names = feature_names(variables, max_frequency);
  out.values.reserve(out.names.size());
  for (std::size_t v = 0; v < sample.variables(); ++v) {
    const auto comps = extract_components(dft(sample.values.row(v)), max_frequency);
    out.values.push_back(comps.dc);
    for (std::size_t f = 0; f < comps.magnitudes.size(); ++f) {
      out.values.push_back(comps.magnitudes[f]);
      out.values.push_back(comps.phases[f]);
    }
  }
  return out;
}

FeatureTable build_feature_table(const Dataset& ds, int max_frequency) {
  FeatureTable table;
  table.names = feature_names(ds.variable_names, max_frequency);
  table.features = Matrix(ds.size(), table.names.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto fv = build_feature_vector(ds.samples[i], ds.variable_names, max_frequency);
    std::copy(fv.values.begin(), fv.values.end(), table.features.row(i).begin());
    table.targets.push_back(ds.samples[i].label);
    table.sample_ids.push_back(ds.samples[i].sample_id);
  }
  return table;
}

FeatureTable FeatureTable::select_columns(const std::vector<std::string>& selected) const {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < names.size(); ++c) index.emplace(names[c], c);
  std::vector<std::size_t> cols;
  for (const auto& s : selected) {
    const auto it = index.find(s);
    if (it == index.end()) throw DataError("feature '" + s + "' is not available");
    cols.push_back(it->second);
  }
  FeatureTable out;
  out.names = selected;
  out.targets = targets;
  out.sample_ids = sample_ids;
  out.features = Matrix(size(), cols.size());
  for (std::size_t r = 0; r < size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out.features(r, c) = features(r, cols[c]);
  return out;
}

FeatureTable FeatureTable::select_rows(const std::vector<std::size_t>& rows) const {
  FeatureTable out;
  out.names = names;
  out.features = Matrix(rows.size(), dims());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = features.row(rows[i]);
    std::copy(src.begin(), src.end(), out.features.row(i).begin());
    out.targets.push_back(targets.at(rows[i]));
    out.sample_ids.push_back(sample_ids.at(rows[i]));
  }
  return out;
}

}  // namespace tskan
