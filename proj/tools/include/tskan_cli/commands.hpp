#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace tskan::cli {

/// Options shared by every command; which ones are required depends on the command.
struct CommandOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string data_path;
  std::string model_path;
  std::string report_path;
  std::string features;  ///< evaluate: "frequency" | "dc-only", empty keeps the config
};

// Each command writes its artifacts and run_manifest.json into out_dir and
// throws tskan::Error subclasses on failure.
void cmd_synth(const CommandOptions& opts, std::ostream& out);
void cmd_train(const CommandOptions& opts, std::ostream& out);
void cmd_select(const CommandOptions& opts, std::ostream& out);
void cmd_evaluate(const CommandOptions& opts, std::ostream& out);
void cmd_explain(const CommandOptions& opts, std::ostream& out);
void cmd_predict(const CommandOptions& opts, std::ostream& out);

}  // namespace tskan::cli
