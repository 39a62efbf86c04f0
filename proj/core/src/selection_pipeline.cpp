#include "tskan/selection_pipeline.hpp"

#include <algorithm>

namespace tskan {

using nlohmann::json;

void PipelineConfig::validate(std::size_t variables) const {
  if (max_frequency < 0) throw ConfigError("F must be >= 0");
  const std::size_t total = variables * static_cast<std::size_t>(2 * max_frequency + 1);
  if (k < 1 || k > total) {
    throw ConfigError("k=" + std::to_string(k) + " outside [1, " + std::to_string(total) + "] for V=" +
                      std::to_string(variables) + ", F=" + std::to_string(max_frequency));
  }
  stage1.validate();
  stage2.validate();
  split.validate();
}

namespace {

FeatureTable scaled(const FeatureTable& t, const ScalerParams& scaler) {
  FeatureTable out = t;
  out.features = apply_scaler(scaler, t.features);
  return out;
}

RmseMetrics metrics_of(const KanModel& model, const FeatureTable& train, const FeatureTable& val,
                       const FeatureTable& test) {
  return {evaluate_rmse(model, train), evaluate_rmse(model, val), evaluate_rmse(model, test)};
}

}  // namespace

PreparedData prepare_data(const Dataset& ds, int max_frequency, const SplitSpec& split) {
  if (ds.target_length == 0) {
    throw DataError("samples have different lengths; enforce a common length first");
  }
  if (max_frequency < 0 || static_cast<std::size_t>(max_frequency) > ds.target_length / 2) {
    throw ConfigError("F=" + std::to_string(max_frequency) + " outside [0, " + std::to_string(ds.target_length / 2) +
                      "] for T=" + std::to_string(ds.target_length));
  }
  const FeatureTable all = build_feature_table(ds, max_frequency);

  PreparedData data;
  data.split = split_indices(ds.size(), split);
  data.schema = FeatureSchema{max_frequency, ds.variable_names, ds.target_length};
  const FeatureTable train_raw = all.select_rows(data.split.train);
  data.scaler = fit_robust_scaler(train_raw.features, all.names);
  data.train = scaled(train_raw, data.scaler);
  data.val = scaled(all.select_rows(data.split.val), data.scaler);
  data.test = scaled(all.select_rows(data.split.test), data.scaler);
  return data;
}

StageOneResult run_stage1(PreparedData data, const PipelineConfig& cfg) {
  cfg.validate(data.schema.variables.size());
  StageOneResult out;
  KanModel init = init_model(data.train.features, data.train.targets, data.train.names, cfg.stage1);
  TrainResult trained = train(std::move(init), data.train.features, data.train.targets, data.val.features,
                              data.val.targets, cfg.stage1);
  out.model = std::move(trained.model);
  out.history = std::move(trained.history);
  out.importance = importance_scores(out.model, data.train.features);
  out.metrics = metrics_of(out.model, data.train, data.val, data.test);
  out.data = std::move(data);
  return out;
}

StageOneResult run_stage1(const Dataset& ds, const PipelineConfig& cfg) {
  cfg.validate(ds.variable_names.size());
  return run_stage1(prepare_data(ds, cfg.max_frequency, cfg.split), cfg);
}

std::vector<std::string> select_top_k(const ImportanceReport& report, std::size_t k) {
  if (k > report.size()) {
    throw ConfigError("cannot select " + std::to_string(k) + " of " + std::to_string(report.size()) + " features");
  }
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(report.entries[i].name);
  return out;
}

PipelineResult run_full_pipeline(const Dataset& ds, const PipelineConfig& cfg) {
  StageOneResult s1 = run_stage1(ds, cfg);
  const PreparedData& data = s1.data;

  PipelineResult result;
  result.config = cfg;
  result.schema = data.schema;
  result.stage1_importance = s1.importance;
  result.stage1_metrics = s1.metrics;
  result.stage1_history = s1.history;
  result.selected_features = select_top_k(s1.importance, cfg.k);

  const FeatureTable train_sel = data.train.select_columns(result.selected_features);
  const FeatureTable val_sel = data.val.select_columns(result.selected_features);
  const FeatureTable test_sel = data.test.select_columns(result.selected_features);

  KanModel init;
  if (cfg.stage2_init == Stage2Init::Fresh) {
    init = init_model(train_sel.features, train_sel.targets, train_sel.names, cfg.stage2);
  } else {
    for (const auto& name : result.selected_features) {
      const auto it = std::find_if(s1.model.activations.begin(), s1.model.activations.end(),
                                   [&](const SplineActivation& a) { return a.input_name == name; });
      init.activations.push_back(*it);
    }
    init.output_bias = s1.model.output_bias;
  }
  TrainResult trained =
      train(std::move(init), train_sel.features, train_sel.targets, val_sel.features, val_sel.targets, cfg.stage2);
  result.final_model = std::move(trained.model);
  result.stage2_history = std::move(trained.history);
  result.final_importance = importance_scores(result.final_model, train_sel.features);
  result.metrics = metrics_of(result.final_model, train_sel, val_sel, test_sel);
  result.scaler = data.scaler.subset(result.selected_features);

  for (std::size_t c = 0; c < train_sel.dims(); ++c) {
    auto col = train_sel.features.column(c);
    std::sort(col.begin(), col.end());
    result.data_ranges[train_sel.names[c]] = CurveRange{quantile_sorted(col, 0.01), quantile_sorted(col, 0.99)};
  }
  return result;
}

void to_json(json& j, const TrainConfig& c) {
  j = json{{"epochs", c.epochs},
           {"learning_rate", c.learning_rate},
           {"smoothness_weight", c.smoothness_weight},
           {"sparsity_weight", c.sparsity_weight},
           {"seed", c.seed},
           {"early_stop_patience", c.early_stop_patience},
           {"grid_size", c.grid_size},
           {"degree", c.degree},
           {"grid_range_quantiles", {c.grid_quantile_lo, c.grid_quantile_hi}},
           {"grid_margin", c.grid_margin},
           {"adam", {{"beta1", c.adam_beta1}, {"beta2", c.adam_beta2}, {"epsilon", c.adam_epsilon}}}};
}

void from_json(const json& j, TrainConfig& c) {
  // Missing keys keep the values already in `c`, so partial objects act as overrides.
  c.epochs = j.value("epochs", c.epochs);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.smoothness_weight = j.value("smoothness_weight", c.smoothness_weight);
  c.sparsity_weight = j.value("sparsity_weight", c.sparsity_weight);
  c.seed = j.value("seed", c.seed);
  c.early_stop_patience = j.value("early_stop_patience", c.early_stop_patience);
  c.grid_size = j.value("grid_size", c.grid_size);
  c.degree = j.value("degree", c.degree);
  if (j.contains("grid_range_quantiles")) {
    const auto& q = j.at("grid_range_quantiles");
    if (!q.is_array() || q.size() != 2) throw ConfigError("grid_range_quantiles must be [lo, hi]");
    c.grid_quantile_lo = q[0].get<double>();
    c.grid_quantile_hi = q[1].get<double>();
  }
  c.grid_margin = j.value("grid_margin", c.grid_margin);
  if (j.contains("adam")) {
    const auto& a = j.at("adam");
    c.adam_beta1 = a.value("beta1", c.adam_beta1);
    c.adam_beta2 = a.value("beta2", c.adam_beta2);
    c.adam_epsilon = a.value("epsilon", c.adam_epsilon);
  }
}

void to_json(json& j, const SplitSpec& s) {
  j = json{{"train", s.train_fraction}, {"val", s.val_fraction}, {"test", s.test_fraction}, {"seed", s.seed}};
}

void from_json(const json& j, SplitSpec& s) {
  s.train_fraction = j.value("train", s.train_fraction);
  s.val_fraction = j.value("val", s.val_fraction);
  s.test_fraction = j.value("test", s.test_fraction);
  s.seed = j.value("seed", s.seed);
}

void to_json(json& j, const PipelineConfig& c) {
  j = json{{"F", c.max_frequency},
           {"k", c.k},
           {"stage1", c.stage1},
           {"stage2", c.stage2},
           {"split", c.split},
           {"stage2_init", c.stage2_init == Stage2Init::Fresh ? "fresh" : "prune"}};
}

void from_json(const json& j, PipelineConfig& c) {
  c.max_frequency = j.value("F", c.max_frequency);
  c.k = j.value("k", c.k);
  if (j.contains("stage1")) from_json(j.at("stage1"), c.stage1);
  if (j.contains("stage2")) from_json(j.at("stage2"), c.stage2);
  if (j.contains("split")) from_json(j.at("split"), c.split);
  const std::string init = j.value("stage2_init", std::string("fresh"));
  if (init == "fresh") {
    c.stage2_init = Stage2Init::Fresh;
  } else if (init == "prune") {
    c.stage2_init = Stage2Init::Prune;
  } else {
    throw ConfigError("stage2_init must be \"fresh\" or \"prune\"");
  }
}

void to_json(json& j, const ImportanceReport& r) {
  j = json::array();
  for (const auto& e : r.entries) j.push_back({{"name", e.name}, {"alpha", e.alpha}, {"rank", e.rank}});
}

void from_json(const json& j, ImportanceReport& r) {
  r.entries.clear();
  for (const auto& e : j)
    r.entries.push_back({e.at("name").get<std::string>(), e.at("alpha").get<double>(), e.at("rank").get<std::size_t>()});
}

void to_json(json& j, const TrainHistory& h) {
  j = json{{"train_loss", h.train_loss},
           {"val_rmse", h.val_rmse},
           {"best_epoch", h.best_epoch},
           {"early_stopped", h.early_stopped}};
}

void from_json(const json& j, TrainHistory& h) {
  j.at("train_loss").get_to(h.train_loss);
  j.at("val_rmse").get_to(h.val_rmse);
  j.at("best_epoch").get_to(h.best_epoch);
  j.at("early_stopped").get_to(h.early_stopped);
}

void to_json(json& j, const RmseMetrics& m) { j = json{{"train", m.train}, {"val", m.val}, {"test", m.test}}; }

void from_json(const json& j, RmseMetrics& m) {
  j.at("train").get_to(m.train);
  j.at("val").get_to(m.val);
  j.at("test").get_to(m.test);
}

json report_to_json(const PipelineResult& r) {
  json ranges = json::object();
  for (const auto& [name, range] : r.data_ranges) ranges[name] = {range.lo, range.hi};
  return json{{"selected_features", r.selected_features},
              {"stage1_importance", r.stage1_importance},
              {"final_importance", r.final_importance},
              {"metrics", {{"stage1", r.stage1_metrics}, {"final", r.metrics}}},
              {"parameters",
               {{"headline", headline_parameter_count(r.final_model)},
                {"with_bias", count_parameters(r.final_model)}}},
              {"config", r.config},
              {"seeds",
               {{"split", r.config.split.seed}, {"stage1", r.config.stage1.seed}, {"stage2", r.config.stage2.seed}}},
              {"history", {{"stage1", r.stage1_history}, {"stage2", r.stage2_history}}},
              {"model", bundle_to_json(r.bundle())},
              {"curve_ranges", ranges}};
}

PipelineResult report_from_json(const json& j) {
  try {
    PipelineResult r;
    j.at("selected_features").get_to(r.selected_features);
    j.at("stage1_importance").get_to(r.stage1_importance);
    j.at("final_importance").get_to(r.final_importance);
    j.at("metrics").at("stage1").get_to(r.stage1_metrics);
    j.at("metrics").at("final").get_to(r.metrics);
    from_json(j.at("config"), r.config);
    j.at("history").at("stage1").get_to(r.stage1_history);
    j.at("history").at("stage2").get_to(r.stage2_history);
    ModelBundle b = bundle_from_json(j.at("model"));
    if (!std::holds_alternative<KanModel>(b.model)) throw DataError("report model must be a KAN");
    r.final_model = std::get<KanModel>(std::move(b.model));
    r.scaler = std::move(b.scaler);
    r.schema = std::move(b.schema);
    for (const auto& [name, range] : j.at("curve_ranges").items())
      r.data_ranges[name] = CurveRange{range.at(0).get<double>(), range.at(1).get<double>()};
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

}  // namespace tskan
