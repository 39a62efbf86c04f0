#pragma once

#include <cmath>
#include <concepts>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tskan/error.hpp"
#include "tskan/kan_model.hpp"
#include "tskan/model_io.hpp"
#include "tskan/spectral_features.hpp"
#include "tskan/timeseries_data.hpp"

namespace tskan {

/// How the stage-2 model is initialized from the selected features.
enum class Stage2Init {
  Fresh,  ///< new model, fresh random coefficients
  Prune,  ///< start from the stage-1 activations of the selected features
};

struct PipelineConfig {
  int max_frequency = 1;
  std::size_t k = 10;
  TrainConfig stage1;
  TrainConfig stage2;
  SplitSpec split;
  Stage2Init stage2_init = Stage2Init::Fresh;

  /// Throws ConfigError unless 1 <= k <= V * (2F + 1) and F >= 0.
  void validate(std::size_t variables) const;
};

/// Scaled feature tables of a split dataset. The scaler is fit on the
/// training part only.
struct PreparedData {
  FeatureTable train;
  FeatureTable val;
  FeatureTable test;
  ScalerParams scaler;
  SplitIndices split;
  FeatureSchema schema;
};

/// Builds frequency features at cutoff F, splits and robust-scales them.
/// Requires a dataset with a common series length.
PreparedData prepare_data(const Dataset& ds, int max_frequency, const SplitSpec& split);

struct RmseMetrics {
  double train = 0.0;
  double val = 0.0;
  double test = 0.0;
};

struct StageOneResult {
  KanModel model;
  ImportanceReport importance;
  TrainHistory history;
  RmseMetrics metrics;
  PreparedData data;
};

/// Trains on all V * (2F + 1) features and scores importance on the training split.
StageOneResult run_stage1(const Dataset& ds, const PipelineConfig& cfg);
StageOneResult run_stage1(PreparedData data, const PipelineConfig& cfg);

/// First k names in rank order. Throws ConfigError when k exceeds the report.
std::vector<std::string> select_top_k(const ImportanceReport& report, std::size_t k);

/// Scaled-input range used for data-driven activation curves.
struct CurveRange {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const CurveRange&, const CurveRange&) = default;
};

struct PipelineResult {
  std::vector<std::string> selected_features;
  ImportanceReport stage1_importance;
  /// Importance of the final model's inputs on the training split.
  ImportanceReport final_importance;
  KanModel final_model;
  /// Scaler restricted to the selected features.
  ScalerParams scaler;
  FeatureSchema schema;
  RmseMetrics stage1_metrics;
  RmseMetrics metrics;
  TrainHistory stage1_history;
  TrainHistory stage2_history;
  PipelineConfig config;
  /// 1st-99th percentile of each selected feature on the (scaled) training split.
  std::map<std::string, CurveRange> data_ranges;

  ModelBundle bundle() const { return {final_model, scaler, schema}; }
};

/// Stage 1, top-k selection, stage-2 retraining on the selected features and
/// RMSE on every split (targets are never scaled).
PipelineResult run_full_pipeline(const Dataset& ds, const PipelineConfig& cfg);

template <class M>
concept Regressor = requires(const M& m, std::span<const double> x) {
  { m.predict(x) } -> std::convertible_to<double>;
};

/// sqrt(mean((prediction - target)^2)) over the rows of `features`.
template <Regressor M>
double evaluate_rmse(const M& model, const Matrix& features, std::span<const double> targets) {
  if (features.rows() == 0) throw DataError("RMSE of an empty set");
  if (targets.size() != features.rows()) throw DataError("feature/target row count mismatch");
  double sse = 0.0;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const double e = model.predict(features.row(r)) - targets[r];
    sse += e * e;
  }
  return std::sqrt(sse / static_cast<double>(features.rows()));
}

template <Regressor M>
double evaluate_rmse(const M& model, const FeatureTable& table) {
  return evaluate_rmse(model, table.features, table.targets);
}

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
void to_json(nlohmann::json& j, const SplitSpec& s);
void from_json(const nlohmann::json& j, SplitSpec& s);
void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);
void to_json(nlohmann::json& j, const ImportanceReport& r);
void from_json(const nlohmann::json& j, ImportanceReport& r);
void to_json(nlohmann::json& j, const TrainHistory& h);
void from_json(const nlohmann::json& j, TrainHistory& h);
void to_json(nlohmann::json& j, const RmseMetrics& m);
void from_json(const nlohmann::json& j, RmseMetrics& m);

/// Full report: selection, importance tables, metrics, config echo with seeds,
/// the final model bundle and curve ranges. Round-trips through report_from_json.
nlohmann::json report_to_json(const PipelineResult& result);
PipelineResult report_from_json(const nlohmann::json& j);

}  // namespace tskan
