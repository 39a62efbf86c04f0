#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tskan/matrix.hpp"
#include "tskan/timeseries_data.hpp"

namespace tskan {

/// Unnormalized DFT coefficients X(f), f = 0..T-1.
using Spectrum = std::vector<std::complex<double>>;

/// X(f) = sum_t x(t) exp(-2 pi i f t / T). Twiddles are taken from a table
/// indexed by (f * t) mod T, so every coefficient is a direct summation.
Spectrum dft(std::span<const double> series);

/// Magnitudes below this have their phase reported as 0.
inline constexpr double kPhaseMagnitudeFloor = 1e-12;

struct SpectralComponents {
  double dc = 0.0;              ///< Re X(0), i.e. the plain sum of the series.
  std::vector<double> magnitudes;  ///< |X(f)| for f = 1..F
  std::vector<double> phases;      ///< arg X(f) in (-pi, pi] for f = 1..F
};

/// Throws DataError unless 0 <= F <= floor(T/2).
SpectralComponents extract_components(const Spectrum& spectrum, int max_frequency);

enum class FeatureKind { Magnitude, Phase };

/// Parsed form of `M_<variable>(<f>)` / `phi_<variable>(<f>)`.
struct FeatureName {
  FeatureKind kind = FeatureKind::Magnitude;
  std::string variable;
  int frequency = 0;

  std::string str() const;
  friend bool operator==(const FeatureName&, const FeatureName&) = default;
};

std::optional<FeatureName> parse_feature_name(std::string_view name);

/// Names for V variables at cutoff F: per variable M(0), then M(f), phi(f)
/// for f = 1..F. Length V * (2F + 1).
std::vector<std::string> feature_names(const std::vector<std::string>& variables, int max_frequency);

struct FrequencyFeatureVector {
  std::vector<double> values;
  std::vector<std::string> names;
  int max_frequency = 0;
};

FrequencyFeatureVector build_feature_vector(const TimeSeriesSample& sample,
                                            const std::vector<std::string>& variables,
                                            int max_frequency);

/// Feature matrix of a whole dataset with aligned targets.
struct FeatureTable {
  Matrix features;  ///< N x D
  std::vector<double> targets;
  std::vector<std::string> names;
  std::vector<std::string> sample_ids;

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t dims() const noexcept { return features.cols(); }
  /// Columns restricted to `selected` (by name, in that order).
  FeatureTable select_columns(const std::vector<std::string>& selected) const;
  /// Rows at the given indices, in that order.
  FeatureTable select_rows(const std::vector<std::size_t>& rows) const;
};

FeatureTable build_feature_table(const Dataset& ds, int max_frequency);

}  // namespace tskan
