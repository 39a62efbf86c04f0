#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tskan/baselines.hpp"
#include "tskan/kan_model.hpp"
#include "tskan/spectral_features.hpp"
#include "tskan/timeseries_data.hpp"

namespace tskan {

/// How raw series become model inputs: DFT cutoff, variable order and the
/// series length the model was trained on.
struct FeatureSchema {
  int max_frequency = 1;
  std::vector<std::string> variables;
  std::size_t series_length = 0;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

void to_json(nlohmann::json& j, const FeatureSchema& s);
void from_json(const nlohmann::json& j, FeatureSchema& s);

void to_json(nlohmann::json& j, const SplineActivation& a);
void from_json(const nlohmann::json& j, SplineActivation& a);
/// `inputs` and `bias` only; the envelope is added by ModelBundle.
void to_json(nlohmann::json& j, const KanModel& m);
void from_json(const nlohmann::json& j, KanModel& m);
void to_json(nlohmann::json& j, const LinearModel& m);
void from_json(const nlohmann::json& j, LinearModel& m);

/// A deployable model: the regressor, the scaler restricted to its inputs and
/// the feature schema. Serialized as
/// {"type":"kan"|"linear","inputs":[...],"bias":...,"scaler":{...},"feature_schema":{...}}.
struct ModelBundle {
  std::variant<KanModel, LinearModel> model;
  ScalerParams scaler;
  FeatureSchema schema;

  std::vector<std::string> input_names() const;
  std::string type() const;
  /// Predictions for every sample of a dataset whose variables follow the schema.
  std::vector<double> predict(const Dataset& ds) const;
  /// Predictions from an unscaled feature table that contains the model inputs.
  std::vector<double> predict(const FeatureTable& table) const;
};

nlohmann::json bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& j);

void save_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

/// Human-readable difference between what a model needs and what a dataset
/// provides; empty when the dataset satisfies the schema.
std::string schema_diff(const FeatureSchema& schema, const std::vector<std::string>& dataset_variables);

}  // namespace tskan
