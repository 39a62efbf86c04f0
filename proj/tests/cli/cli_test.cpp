#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "tskan/format.hpp"
#include "tskan/synth.hpp"
#include "tskan_cli/app.hpp"
#include "tskan_cli/config.hpp"
#include "tskan_cli/manifest.hpp"

namespace tskan::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tskan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) { return json::parse(testing::read_file(p)); }

class EnvGuard {
 public:
  explicit EnvGuard(const char* value) {
    if (value) {
      setenv("TSKAN_SEED", value, 1);
    } else {
      unsetenv("TSKAN_SEED");
    }
  }
  ~EnvGuard() { unsetenv("TSKAN_SEED"); }
};

// Small but learnable workload.
std::string write_config(const fs::path& dir, std::optional<std::uint64_t> seed) {
  json synth = testing::four_effect_spec(0, 300);
  json j = {{"synth", synth},
            {"pipeline",
             {{"k", 6},
              {"stage1", {{"epochs", 150}, {"learning_rate", 0.02}}},
              {"stage2", {{"epochs", 150}, {"learning_rate", 0.02}}}}},
            {"explain", {{"n_points", 50}}}};
  if (seed) j["seed"] = *seed;
  const fs::path p = dir / "config.json";
  write_text_file(p.string(), j.dump(2));
  return p.string();
}

TEST(SeedResolution, Precedence) {
  EXPECT_EQ(resolve_seed(5, 6, "7").value, 5u);
  EXPECT_EQ(resolve_seed(5, 6, "7").source, SeedSource::Flag);
  EXPECT_EQ(resolve_seed(std::nullopt, 6, "7").source, SeedSource::Config);
  EXPECT_EQ(resolve_seed(std::nullopt, std::nullopt, "7").value, 7u);
  EXPECT_EQ(resolve_seed(std::nullopt, std::nullopt, "7").source, SeedSource::Environment);
  EXPECT_EQ(resolve_seed(std::nullopt, std::nullopt, nullptr).value, 0u);
  EXPECT_EQ(resolve_seed(std::nullopt, std::nullopt, nullptr).source, SeedSource::Default);
  EXPECT_THROW(resolve_seed(std::nullopt, std::nullopt, "12abc"), ConfigError);
  EXPECT_THROW(resolve_seed(std::nullopt, std::nullopt, "-3"), ConfigError);
}

TEST(SeedResolution, AppliedToEveryStream) {
  CliConfig c;
  c.synth.seed = 99;
  c.pipeline.stage1.seed = 99;
  apply_seed(c, 42);
  EXPECT_EQ(c.synth.seed, 42u);
  EXPECT_EQ(c.pipeline.split.seed, 42u);
  EXPECT_NE(c.pipeline.stage1.seed, 99u);
  EXPECT_NE(c.pipeline.stage1.seed, c.pipeline.stage2.seed);
  CliConfig d;
  apply_seed(d, 42);
  EXPECT_EQ(config_to_json(c), config_to_json(d));
}

TEST(Cli, SeedSourceRecordedInManifest) {
  testing::TempDir dir("cli_seed");
  const std::string cfg_with = write_config(dir.path(), 11);
  const fs::path plain_dir = dir.path() / "plain";
  fs::create_directories(plain_dir);
  const std::string cfg_without = write_config(plain_dir, std::nullopt);

  struct Case {
    std::vector<std::string> extra;
    std::string config;
    const char* env;
    std::uint64_t seed;
    std::string source;
  };
  const std::vector<Case> cases{
      {{"--seed", "3"}, cfg_with, "5", 3, "flag"},
      {{}, cfg_with, "5", 11, "config"},
      {{}, cfg_without, "5", 5, "env"},
      {{}, cfg_without, nullptr, 0, "default"},
  };
  int i = 0;
  for (const auto& c : cases) {
    EnvGuard env(c.env);
    const fs::path out = dir.path() / ("out" + std::to_string(i++));
    std::vector<std::string> args{"synth", "-c", c.config, "-o", out.string()};
    args.insert(args.end(), c.extra.begin(), c.extra.end());
    const Outcome o = invoke(args);
    ASSERT_EQ(o.code, 0) << o.err;
    const json m = read_json(out / kRunManifestName);
    EXPECT_EQ(m.at("seeds").at("master"), c.seed);
    EXPECT_EQ(m.at("seeds").at("source"), c.source);
    EXPECT_EQ(read_json(out / "ground_truth.json").at("seed"), c.seed);
  }
}

TEST(Cli, ExitCodes) {
  testing::TempDir dir("cli_exit");
  EnvGuard env(nullptr);
  const std::string out = (dir.path() / "o").string();
  EXPECT_EQ(invoke({}).code, kConfigError);
  EXPECT_EQ(invoke({"train", "-o", out, "--bogus"}).code, kConfigError);
  EXPECT_EQ(invoke({"train", "-o", out, "-d", (dir.path() / "missing.csv").string()}).code, kDataError);
  EXPECT_EQ(invoke({"synth", "-o", out, "-c", (dir.path() / "missing.json").string()}).code, kConfigError);
  write_text_file((dir.path() / "bad.json").string(), "{\"pipeline\": {\"k\": 0}}");
  std::string csv = "sample_id,chunk_index,a,mos\n";
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 4; ++t) csv += "s" + std::to_string(s) + "," + std::to_string(t) + "," + std::to_string(s * t) + ",0.5\n";
  write_text_file((dir.path() / "data.csv").string(), csv);
  EXPECT_EQ(invoke({"train", "-o", out, "-c", (dir.path() / "bad.json").string(), "-d",
                    (dir.path() / "data.csv").string()})
                .code,
            kConfigError);
  write_text_file((dir.path() / "broken.json").string(), "{ nope");
  EXPECT_EQ(invoke({"synth", "-o", out, "-c", (dir.path() / "broken.json").string()}).code, kConfigError);
  EXPECT_EQ(invoke({"explain", "-o", out, "-r", (dir.path() / "missing.json").string()}).code, kDataError);
  EXPECT_EQ(invoke({"predict", "-o", out, "-m", (dir.path() / "missing.json").string(), "-d",
                    (dir.path() / "data.csv").string()})
                .code,
            kDataError);
  write_text_file((dir.path() / "blocker").string(), "x");
  EXPECT_EQ(invoke({"synth", "-o", (dir.path() / "blocker" / "sub").string()}).code, kIoError);
  EXPECT_EQ(invoke({"synth", "--help"}).code, kOk);
}

std::map<std::string, std::string> artifact_hashes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  const json manifest = read_json(dir / kRunManifestName);
  for (const auto& a : manifest.at("artifacts")) {
    const std::string path = a.at("path");
    EXPECT_EQ(a.at("sha256"), sha256_file((dir / path).string())) << path;
    out[path] = a.at("sha256");
  }
  return out;
}

class Workflow : public ::testing::Test {
 protected:
  static void run_all(const fs::path& root, const std::string& config) {
    const std::string data = (root / "synth" / "dataset.csv").string();
    const std::string report = (root / "train" / "report.json").string();
    const std::string model = (root / "train" / "model.json").string();
    const std::vector<std::vector<std::string>> cmds{
        {"synth", "-c", config, "-o", (root / "synth").string()},
        {"train", "-c", config, "-d", data, "-o", (root / "train").string()},
        {"select", "-c", config, "-d", data, "-o", (root / "select").string()},
        {"evaluate", "-c", config, "-d", data, "-m", model, "-o", (root / "evaluate").string()},
        {"explain", "-c", config, "-r", report, "-o", (root / "explain").string()},
        {"predict", "-c", config, "-m", model, "-d", data, "-o", (root / "predict").string()},
    };
    for (const auto& c : cmds) {
      const Outcome o = invoke(c);
      ASSERT_EQ(o.code, 0) << c[0] << ": " << o.err;
    }
  }
};

TEST_F(Workflow, ArtifactsAreReproducible) {
  EnvGuard env(nullptr);
  testing::TempDir dir("cli_workflow");
  const std::string config = write_config(dir.path(), 17);
  run_all(dir.path() / "a", config);
  run_all(dir.path() / "b", config);
  for (const char* cmd : {"synth", "train", "select", "evaluate", "explain", "predict"}) {
    const auto a = artifact_hashes(dir.path() / "a" / cmd);
    const auto b = artifact_hashes(dir.path() / "b" / cmd);
    EXPECT_FALSE(a.empty()) << cmd;
    EXPECT_EQ(a, b) << cmd;
  }
  const auto train = artifact_hashes(dir.path() / "a" / "train");
  EXPECT_TRUE(train.count("model.json"));
  EXPECT_TRUE(train.count("report.json"));
  EXPECT_TRUE(artifact_hashes(dir.path() / "a" / "explain").count("importance.svg"));

  const std::string preds = testing::read_file(dir.path() / "a" / "predict" / "predictions.csv");
  EXPECT_EQ(preds.substr(0, preds.find('\n')), "sample_id,prediction");
  EXPECT_EQ(static_cast<std::size_t>(std::count(preds.begin(), preds.end(), '\n')), 301u);
}

TEST_F(Workflow, PredictRejectsForeignSchema) {
  EnvGuard env(nullptr);
  testing::TempDir dir("cli_schema");
  const std::string config = write_config(dir.path(), 4);
  run_all(dir.path(), config);
  SynthSpec other = testing::four_effect_spec(1, 20);
  other.variables = {"stalling", "bitrate", "chunksize", "qp", "framerate", "audio"};
  other.effects.clear();
  const fs::path csv = dir.path() / "other.csv";
  write_text_file(csv.string(), dataset_to_csv(generate_synthetic(other).dataset));
  const Outcome o = invoke({"predict", "-m", (dir.path() / "train" / "model.json").string(), "-d", csv.string(), "-o",
                            (dir.path() / "p2").string()});
  EXPECT_EQ(o.code, kDataError);
  EXPECT_NE(o.err.find("missing variables [videowidth]"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("unexpected variables [audio]"), std::string::npos) << o.err;
}

TEST_F(Workflow, EvaluatePrintsTable) {
  EnvGuard env(nullptr);
  testing::TempDir dir("cli_eval");
  const std::string config = write_config(dir.path(), 8);
  run_all(dir.path(), config);
  const Outcome o = invoke({"evaluate", "-c", config, "-d", (dir.path() / "synth" / "dataset.csv").string(), "-m",
                            (dir.path() / "train" / "model.json").string(), "--features", "dc-only", "-o",
                            (dir.path() / "ev2").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* row : {"lr", "lasso", "tskan"}) EXPECT_NE(o.out.find(row), std::string::npos) << row;
  const json ev = read_json(dir.path() / "ev2" / "evaluation.json");
  EXPECT_FALSE(ev.empty());
}

}  // namespace
}  // namespace tskan::cli
