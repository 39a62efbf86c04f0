#include "tskan/model_io.hpp"

#include <algorithm>

#include "tskan/error.hpp"
#include "tskan/format.hpp"

namespace tskan {

using nlohmann::json;

void to_json(json& j, const FeatureSchema& s) {
  j = json{{"F", s.max_frequency}, {"variables", s.variables}, {"T", s.series_length}};
}

void from_json(const json& j, FeatureSchema& s) {
  j.at("F").get_to(s.max_frequency);
  j.at("variables").get_to(s.variables);
  s.series_length = j.value("T", std::size_t{0});
}

void to_json(json& j, const SplineActivation& a) {
  j = json{{"name", a.input_name},
           {"grid", a.grid},
           {"degree", a.degree},
           {"coefficients", a.coefficients},
           {"base_weight", a.base_weight}};
}

void from_json(const json& j, SplineActivation& a) {
  j.at("name").get_to(a.input_name);
  j.at("grid").get_to(a.grid);
  j.at("degree").get_to(a.degree);
  j.at("coefficients").get_to(a.coefficients);
  j.at("base_weight").get_to(a.base_weight);
  a.validate();
}

void to_json(json& j, const KanModel& m) {
  j = json{{"inputs", m.activations}, {"bias", m.output_bias}};
}

void from_json(const json& j, KanModel& m) {
  j.at("inputs").get_to(m.activations);
  j.at("bias").get_to(m.output_bias);
  m.validate();
}

void to_json(json& j, const LinearModel& m) {
  json inputs = json::array();
  for (std::size_t i = 0; i < m.weights.size(); ++i)
    inputs.push_back({{"name", m.feature_names.at(i)}, {"weight", m.weights[i]}});
  j = json{{"inputs", inputs}, {"bias", m.intercept}};
}

void from_json(const json& j, LinearModel& m) {
  m = LinearModel{};
  for (const auto& in : j.at("inputs")) {
    m.feature_names.push_back(in.at("name").get<std::string>());
    m.weights.push_back(in.at("weight").get<double>());
  }
  j.at("bias").get_to(m.intercept);
}

std::vector<std::string> ModelBundle::input_names() const {
  return std::visit(
      [](const auto& m) -> std::vector<std::string> {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, KanModel>) {
          return m.input_names();
        } else {
          return m.feature_names;
        }
      },
      model);
}

std::string ModelBundle::type() const { return std::holds_alternative<KanModel>(model) ? "kan" : "linear"; }

std::vector<double> ModelBundle::predict(const FeatureTable& table) const {
  const FeatureTable inputs = table.select_columns(input_names());
  const Matrix scaled = apply_scaler(scaler, inputs.features);
  std::vector<double> out(scaled.rows());
  std::visit(
      [&](const auto& m) {
        for (std::size_t r = 0; r < scaled.rows(); ++r) out[r] = m.predict(scaled.row(r));
      },
      model);
  return out;
}

std::vector<double> ModelBundle::predict(const Dataset& ds) const {
  if (ds.variable_names != schema.variables) {
    const std::string diff = schema_diff(schema, ds.variable_names);
    throw DataError("dataset does not match the model schema" + (diff.empty() ? std::string{} : ": " + diff));
  }
  if (schema.series_length != 0 && ds.target_length != schema.series_length) {
    throw DataError("model was trained on series of length " + std::to_string(schema.series_length) +
                    ", dataset has length " + std::to_string(ds.target_length));
  }
  return predict(build_feature_table(ds, schema.max_frequency));
}

json bundle_to_json(const ModelBundle& bundle) {
  json j;
  std::visit([&](const auto& m) { j = m; }, bundle.model);
  j["type"] = bundle.type();
  j["scaler"] = bundle.scaler;
  j["feature_schema"] = bundle.schema;
  return j;
}

ModelBundle bundle_from_json(const json& j) {
  try {
    ModelBundle b;
    const std::string type = j.value("type", std::string("kan"));
    if (type == "kan") {
      b.model = j.get<KanModel>();
    } else if (type == "linear") {
      b.model = j.get<LinearModel>();
    } else {
      throw DataError("unknown model type '" + type + "'");
    }
    j.at("scaler").get_to(b.scaler);
    j.at("feature_schema").get_to(b.schema);
    if (b.scaler.size() != b.input_names().size())
      throw DataError("scaler size does not match model input count");
    if (!b.scaler.feature_names.empty() && b.scaler.feature_names != b.input_names())
      throw DataError("scaler feature names do not match model inputs");
    return b;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
}

void save_bundle(const ModelBundle& bundle, const std::string& path) {
  write_text_file(path, bundle_to_json(bundle).dump(2) + "\n");
}

ModelBundle load_bundle(const std::string& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return bundle_from_json(j);
}

std::string schema_diff(const FeatureSchema& schema, const std::vector<std::string>& dataset_variables) {
  std::vector<std::string> missing;
  std::vector<std::string> unexpected;
  for (const auto& v : schema.variables)
    if (std::find(dataset_variables.begin(), dataset_variables.end(), v) == dataset_variables.end())
      missing.push_back(v);
  for (const auto& v : dataset_variables)
    if (std::find(schema.variables.begin(), schema.variables.end(), v) == schema.variables.end())
      unexpected.push_back(v);
  const auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  std::string out;
  if (!missing.empty()) out += "missing variables [" + join(missing) + "]";
  if (!unexpected.empty()) out += std::string(out.empty() ? "" : "; ") + "unexpected variables [" + join(unexpected) + "]";
  if (out.empty() && schema.variables != dataset_variables) out = "variable order differs";
  return out;
}

}  // namespace tskan
