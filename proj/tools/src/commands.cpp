#include "tskan_cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>

#include "tskan/error.hpp"
#include "tskan/explain_export.hpp"
#include "tskan/format.hpp"
#include "tskan/model_io.hpp"
#include "tskan_cli/config.hpp"
#include "tskan_cli/manifest.hpp"

namespace tskan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  CliConfig config;
  ResolvedSeed seed;
  RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

Run begin(const std::string& command, const CommandOptions& opts) {
  Run run;
  if (!opts.config_path.empty()) run.config = load_config(opts.config_path);
  run.seed = resolve_seed(opts.seed, run.config.seed, std::getenv("TSKAN_SEED"));
  apply_seed(run.config, run.seed.value);
  if (!opts.data_path.empty()) run.config.data.path = opts.data_path;

  if (opts.out_dir.empty()) throw ConfigError(command + ": --out is required");
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + opts.out_dir + "': " + ec.message());

  run.manifest.command = command;
  run.manifest.output_dir = opts.out_dir;
  run.manifest.config = config_to_json(run.config);
  run.manifest.seeds = {{"master", run.seed.value},
                        {"source", to_string(run.seed.source)},
                        {"split", run.config.pipeline.split.seed},
                        {"stage1", run.config.pipeline.stage1.seed},
                        {"stage2", run.config.pipeline.stage2.seed}};
  if (!opts.config_path.empty()) run.manifest.inputs["config"] = opts.config_path;
  return run;
}

void write_artifact(Run& run, const std::string& name, std::string_view content) {
  write_text_file((fs::path(run.manifest.output_dir) / name).string(), content);
  run.manifest.add_artifact(name);
}

void write_json_artifact(Run& run, const std::string& name, const json& j) {
  write_artifact(run, name, j.dump(2) + "\n");
}

void finish(Run& run) {
  run.manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - run.start).count();
  write_text_file((fs::path(run.manifest.output_dir) / kRunManifestName).string(), run.manifest.to_json().dump(2) + "\n");
}

Dataset load_data(Run& run) {
  const DataConfig& d = run.config.data;
  if (d.path.empty()) throw ConfigError("no dataset: pass --data or set data.path in the config");
  run.manifest.inputs["data"] = d.path;
  LoadOptions lo;
  lo.schema = d.variables;
  lo.label_range = d.label_range;
  Dataset ds = load_dataset(d.path, lo);
  if (d.max_length > 0) {
    LengthReport rep = enforce_length(ds, d.max_length, d.length_policy);
    run.manifest.inputs["dropped_samples"] = rep.dropped;
    ds = std::move(rep.dataset);
  } else if (ds.target_length == 0) {
    throw DataError(d.path + ": samples have different lengths; set data.max_length");
  }
  return ds;
}

// Input files that cannot be read are data errors, like a missing dataset.
template <class F>
auto read_input(F&& f) {
  try {
    return f();
  } catch (const IoError& e) {
    throw DataError(e.what());
  }
}

std::string rmse_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%10.4f", v);
  return buf;
}

}  // namespace

void cmd_synth(const CommandOptions& opts, std::ostream& out) {
  Run run = begin("synth", opts);
  const SynthResult syn = generate_synthetic(run.config.synth);
  write_artifact(run, "dataset.csv", dataset_to_csv(syn.dataset));
  write_json_artifact(run, "ground_truth.json", syn.ground_truth);
  finish(run);
  out << "wrote " << syn.dataset.size() << " samples (V=" << syn.dataset.variable_names.size()
      << ", T=" << syn.dataset.target_length << ") to " << opts.out_dir << "\n";
}

void cmd_train(const CommandOptions& opts, std::ostream& out) {
  Run run = begin("train", opts);
  const Dataset ds = load_data(run);
  const PipelineResult result = run_full_pipeline(ds, run.config.pipeline);
  write_json_artifact(run, "report.json", report_to_json(result));
  write_json_artifact(run, "model.json", bundle_to_json(result.bundle()));
  finish(run);

  out << "selected " << result.selected_features.size() << " features:";
  for (const auto& f : result.selected_features) out << " " << f;
  out << "\nparameters: " << headline_parameter_count(result.final_model) << " (+1 bias)\n";
  out << "rmse train " << format_number(result.metrics.train, 6) << "  val " << format_number(result.metrics.val, 6)
      << "  test " << format_number(result.metrics.test, 6) << "\n";
}

void cmd_select(const CommandOptions& opts, std::ostream& out) {
  Run run = begin("select", opts);
  const Dataset ds = load_data(run);
  const StageOneResult s1 = run_stage1(ds, run.config.pipeline);
  const auto selected = select_top_k(s1.importance, run.config.pipeline.k);
  write_json_artifact(run, "selection.json",
                      {{"selected_features", selected},
                       {"importance", s1.importance},
                       {"metrics", s1.metrics},
                       {"history", s1.history},
                       {"config", run.config.pipeline}});
  finish(run);
  for (const auto& e : s1.importance.entries) {
    out << std::setw(3) << e.rank << "  " << std::left << std::setw(24) << e.name << std::right
        << format_number(e.alpha, 6) << (e.rank <= selected.size() ? "  *" : "") << "\n";
  }
}

void cmd_evaluate(const CommandOptions& opts, std::ostream& out) {
  Run run = begin("evaluate", opts);
  if (opts.features == "frequency") {
    run.config.baselines.features = BaselineFeatures::Frequency;
  } else if (opts.features == "dc-only") {
    run.config.baselines.features = BaselineFeatures::DcOnly;
  } else if (!opts.features.empty()) {
    throw ConfigError("--features must be frequency or dc-only");
  }
  run.manifest.config = config_to_json(run.config);
  const Dataset ds = load_data(run);
  const PipelineConfig& pc = run.config.pipeline;
  const PreparedData data = prepare_data(ds, pc.max_frequency, pc.split);

  const auto names = baseline_feature_names(data.train.names, run.config.baselines.features);
  const FeatureTable tr = data.train.select_columns(names);
  const FeatureTable va = data.val.select_columns(names);
  const FeatureTable te = data.test.select_columns(names);

  struct Row {
    std::string model;
    std::size_t parameters;
    RmseMetrics rmse;
  };
  std::vector<Row> rows;

  const LinearModel lr = fit_linear_regression(tr.features, tr.targets, names);
  rows.push_back({"lr", lr.parameter_count(), {evaluate_rmse(lr, tr), evaluate_rmse(lr, va), evaluate_rmse(lr, te)}});
  const auto& bc = run.config.baselines;
  const LassoResult lasso = fit_lasso(tr.features, tr.targets, bc.lasso_lambda, bc.lasso_tol, bc.lasso_max_iter, names);
  std::size_t nonzero = 0;
  for (const double w : lasso.model.weights) nonzero += w != 0.0;
  rows.push_back({"lasso", nonzero,
                  {evaluate_rmse(lasso.model, tr), evaluate_rmse(lasso.model, va), evaluate_rmse(lasso.model, te)}});

  const ScalerParams sub = data.scaler.subset(names);
  write_json_artifact(run, "model_lr.json", bundle_to_json({lr, sub, data.schema}));
  write_json_artifact(run, "model_lasso.json", bundle_to_json({lasso.model, sub, data.schema}));

  if (!opts.model_path.empty()) {
    run.manifest.inputs["model"] = opts.model_path;
    const ModelBundle bundle = read_input([&] { return load_bundle(opts.model_path); });
    if (bundle.schema.max_frequency != pc.max_frequency) {
      throw ConfigError("model uses F=" + std::to_string(bundle.schema.max_frequency) + " but the config has F=" +
                        std::to_string(pc.max_frequency));
    }
    const auto rmse_on = [&](const std::vector<std::size_t>& idx) {
      const Dataset part = select_samples(ds, idx);
      const std::vector<double> pred = bundle.predict(part);
      double sse = 0.0;
      for (std::size_t i = 0; i < pred.size(); ++i) sse += (pred[i] - part.samples[i].label) * (pred[i] - part.samples[i].label);
      return std::sqrt(sse / static_cast<double>(pred.size()));
    };
    std::size_t params = 0;
    if (const auto* kan = std::get_if<KanModel>(&bundle.model)) {
      params = headline_parameter_count(*kan);
    } else {
      params = std::get<LinearModel>(bundle.model).parameter_count();
    }
    rows.push_back({bundle.type() == "kan" ? "tskan" : "linear(model)", params,
                    {rmse_on(data.split.train), rmse_on(data.split.val), rmse_on(data.split.test)}});
  }

  json table = json::array();
  for (const auto& r : rows) table.push_back({{"model", r.model}, {"parameters", r.parameters}, {"rmse", r.rmse}});
  write_json_artifact(run, "evaluation.json",
                      {{"features", bc.features == BaselineFeatures::Frequency ? "frequency" : "dc-only"},
                       {"lasso", {{"lambda", bc.lasso_lambda}, {"iterations", lasso.iterations}, {"converged", lasso.converged}}},
                       {"results", table}});
  finish(run);

  out << "model           params     train       val      test\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(14) << r.model << std::right << std::setw(8) << r.parameters << rmse_cell(r.rmse.train)
        << rmse_cell(r.rmse.val) << rmse_cell(r.rmse.test) << "\n";
  }
  if (!lasso.converged) out << "warning: lasso stopped at max_iter without converging\n";
}

void cmd_explain(const CommandOptions& opts, std::ostream& out) {
  Run run = begin("explain", opts);
  if (opts.report_path.empty()) throw ConfigError("explain: --report is required");
  run.manifest.inputs["report"] = opts.report_path;
  const PipelineResult result = read_input([&] {
    json j;
    try {
      j = json::parse(read_text_file(opts.report_path));
    } catch (const json::exception& e) {
      throw DataError(opts.report_path + ": " + e.what());
    }
    return report_from_json(j);
  });

  CurveOptions co;
  co.n_points = run.config.explain.n_points;
  co.range = run.config.explain.range;
  co.series_length = result.schema.series_length == 0 ? 1 : result.schema.series_length;
  const auto files = export_explanation_report(result, opts.out_dir, co);
  for (const auto& f : files) run.manifest.add_artifact(f);
  run.manifest.add_artifact("manifest.json");

  const std::size_t T = result.schema.series_length >= 4 ? result.schema.series_length : 16;
  write_artifact(run, "phase_illustration.csv", phase_illustration_csv(phase_illustration(T, run.config.explain.phases)));
  finish(run);
  out << "wrote " << files.size() + 2 << " files to " << opts.out_dir << "\n";
}

void cmd_predict(const CommandOptions& opts, std::ostream& out) {
  Run run = begin("predict", opts);
  if (opts.model_path.empty()) throw ConfigError("predict: --model is required");
  const std::string& path = run.config.data.path;
  if (path.empty()) throw ConfigError("no dataset: pass --data or set data.path in the config");
  run.manifest.inputs["model"] = opts.model_path;
  run.manifest.inputs["data"] = path;

  const ModelBundle bundle = read_input([&] { return load_bundle(opts.model_path); });
  const std::string text = read_input([&] { return read_text_file(path); });

  LoadOptions lo;
  lo.require_label = false;
  lo.label_range.reset();
  const Dataset as_found = parse_dataset(text, lo, path);
  const std::string diff = schema_diff(bundle.schema, as_found.variable_names);
  if (!diff.empty()) throw DataError("dataset does not match the model schema: " + diff);

  lo.schema = bundle.schema.variables;
  Dataset ds = parse_dataset(text, lo, path);
  if (bundle.schema.series_length != 0 && ds.target_length != bundle.schema.series_length) {
    LengthReport rep = enforce_length(ds, bundle.schema.series_length, run.config.data.length_policy);
    run.manifest.inputs["dropped_samples"] = rep.dropped;
    ds = std::move(rep.dataset);
  }
  const std::vector<double> pred = bundle.predict(ds);

  std::string csv = "sample_id,prediction\n";
  for (std::size_t i = 0; i < pred.size(); ++i) csv += ds.samples[i].sample_id + "," + format_number(pred[i], 17) + "\n";
  write_artifact(run, "predictions.csv", csv);
  finish(run);
  out << "wrote " << pred.size() << " predictions to " << (fs::path(opts.out_dir) / "predictions.csv").string() << "\n";
}

}  // namespace tskan::cli
