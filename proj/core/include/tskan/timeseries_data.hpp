#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tskan/matrix.hpp"

namespace tskan {

/// One streaming session: V variables (rows) by T chunks (columns) plus the
/// z-scored MOS label.
struct TimeSeriesSample {
  std::string sample_id;
  Matrix values;
  double label = 0.0;

  std::size_t variables() const noexcept { return values.rows(); }
  std::size_t length() const noexcept { return values.cols(); }
};

struct LabelRange {
  double lo = -2.5;
  double hi = 2.5;
};

struct Dataset {
  std::vector<TimeSeriesSample> samples;
  std::vector<std::string> variable_names;
  /// Common sample length; 0 while samples still have heterogeneous lengths.
  std::size_t target_length = 0;

  std::size_t size() const noexcept { return samples.size(); }
};

struct LoadOptions {
  /// Expected variable columns in output order. Empty means "every column of
  /// the header other than sample_id, chunk_index and mos, in header order".
  std::vector<std::string> schema;
  /// Labels outside the range are rejected; nullopt disables the check.
  std::optional<LabelRange> label_range = LabelRange{};
  /// When false a missing mos column is allowed and labels are set to 0.
  bool require_label = true;
};

/// Reads the long-format CSV `sample_id,chunk_index,<vars...>,mos`. Samples keep
/// the order of their first row; rows within a sample are ordered by
/// chunk_index, which must cover 0..T-1 exactly once.
Dataset load_dataset(const std::string& path, const LoadOptions& options = {});
Dataset parse_dataset(const std::string& csv_text, const LoadOptions& options = {},
                      const std::string& source_name = "<memory>");

/// Writes the same long format back out with round-trip precision.
std::string dataset_to_csv(const Dataset& ds);

enum class LengthPolicy { Drop, Error };

struct LengthReport {
  Dataset dataset;
  std::size_t dropped = 0;
};

/// Fixes every sample to exactly `max_length` chunks. Longer samples are dropped
/// (or rejected under LengthPolicy::Error); shorter samples are always an error.
LengthReport enforce_length(const Dataset& ds, std::size_t max_length, LengthPolicy policy);

struct SplitSpec {
  double train_fraction = 0.70;
  double val_fraction = 0.15;
  double test_fraction = 0.15;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Sample indices of a partition, in shuffled order.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Part sizes for `n` samples: validation and test get max(1, round(n * f)),
/// training gets the remainder. Throws DataError when training would be empty.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec);

SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

struct DatasetSplit {
  Dataset train;
  Dataset val;
  Dataset test;
};

DatasetSplit split_dataset(const Dataset& ds, const SplitSpec& spec);

/// Subset of `ds` in the given index order.
Dataset select_samples(const Dataset& ds, const std::vector<std::size_t>& indices);

/// Median/IQR scaling parameters, one entry per feature column.
struct ScalerParams {
  std::vector<double> center;
  std::vector<double> scale;
  std::vector<std::string> feature_names;

  std::size_t size() const noexcept { return center.size(); }
  /// Parameters restricted to the named columns, in the given order.
  ScalerParams subset(const std::vector<std::string>& names) const;

  friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

inline constexpr double kScaleFloor = 1e-12;

/// Quantile with linear interpolation between order statistics
/// (position q * (n - 1)). `sorted` must be ascending and non-empty.
double quantile_sorted(const std::vector<double>& sorted, double q);

ScalerParams fit_robust_scaler(const Matrix& features, std::vector<std::string> feature_names = {});
Matrix apply_scaler(const ScalerParams& params, const Matrix& features);
Matrix invert_scaler(const ScalerParams& params, const Matrix& scaled);

void to_json(nlohmann::json& j, const ScalerParams& p);
void from_json(const nlohmann::json& j, ScalerParams& p);

}  // namespace tskan
