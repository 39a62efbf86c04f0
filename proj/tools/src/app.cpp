#include "tskan_cli/app.hpp"

#include <functional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tskan/error.hpp"
#include "tskan_cli/commands.hpp"

namespace tskan::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-feature KAN regression for multivariate time series", "tskan"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::function<void(const CommandOptions&, std::ostream&)> action;

  const auto add = [&](const std::string& name, const std::string& help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opts.config_path, "JSON config file");
    sub->add_option("--seed", opts.seed, "master seed (overrides config and TSKAN_SEED)");
    sub->add_option("-o,--out", opts.out_dir, "output directory")->required();
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };

  add("synth", "generate a synthetic dataset with planted frequency effects", cmd_synth);
  add("train", "two-stage pipeline: train, select top-k, retrain", cmd_train)
      ->add_option("-d,--data", opts.data_path, "dataset CSV");
  add("select", "stage 1 only: importance ranking and top-k", cmd_select)
      ->add_option("-d,--data", opts.data_path, "dataset CSV");
  {
    CLI::App* ev = add("evaluate", "RMSE table for baselines and an optional trained model", cmd_evaluate);
    ev->add_option("-d,--data", opts.data_path, "dataset CSV");
    ev->add_option("-m,--model", opts.model_path, "model JSON to evaluate alongside the baselines");
    ev->add_option("--features", opts.features, "baseline inputs: frequency or dc-only")
        ->check(CLI::IsMember({"frequency", "dc-only"}));
  }
  add("explain", "activation curves, importance summary and phase illustration", cmd_explain)
      ->add_option("-r,--report", opts.report_path, "report JSON written by train")
      ->required();
  {
    CLI::App* pr = add("predict", "predict MOS for a dataset with a saved model", cmd_predict);
    pr->add_option("-m,--model", opts.model_path, "model JSON")->required();
    pr->add_option("-d,--data", opts.data_path, "dataset CSV");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    action(opts, out);
    return kOk;
  } catch (const Error& e) {
    err << "tskan: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Config: return kConfigError;
      case ErrorKind::Data: return kDataError;
      case ErrorKind::Training: return kTrainingError;
      case ErrorKind::Io: return kIoError;
    }
    return kIoError;
  } catch (const nlohmann::json::exception& e) {
    err << "tskan: malformed JSON input: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace tskan::cli
