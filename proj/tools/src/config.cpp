#include "tskan_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tskan/error.hpp"
#include "tskan/rng.hpp"

namespace tskan::cli {

using nlohmann::json;

namespace {

LengthPolicy parse_length_policy(const std::string& s) {
  if (s == "drop") return LengthPolicy::Drop;
  if (s == "error") return LengthPolicy::Error;
  throw ConfigError("data.length_policy must be \"drop\" or \"error\", got \"" + s + "\"");
}

BaselineFeatures parse_baseline_features(const std::string& s) {
  if (s == "frequency") return BaselineFeatures::Frequency;
  if (s == "dc-only") return BaselineFeatures::DcOnly;
  throw ConfigError("baselines.features must be \"frequency\" or \"dc-only\", got \"" + s + "\"");
}

RangePolicy parse_range_policy(const std::string& s) {
  if (s == "data") return RangePolicy::Data;
  if (s == "grid") return RangePolicy::Grid;
  throw ConfigError("explain.range must be \"data\" or \"grid\", got \"" + s + "\"");
}

void parse_data(const json& j, DataConfig& d) {
  d.path = j.value("path", d.path);
  d.variables = j.value("variables", d.variables);
  d.max_length = j.value("max_length", d.max_length);
  if (j.contains("length_policy")) d.length_policy = parse_length_policy(j.at("length_policy").get<std::string>());
  if (j.contains("label_range")) {
    const auto& r = j.at("label_range");
    if (r.is_null()) {
      d.label_range.reset();
    } else {
      if (!r.is_array() || r.size() != 2) throw ConfigError("data.label_range must be [lo, hi] or null");
      d.label_range = LabelRange{r[0].get<double>(), r[1].get<double>()};
      if (!(d.label_range->lo <= d.label_range->hi)) throw ConfigError("data.label_range needs lo <= hi");
    }
  }
}

}  // namespace

CliConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  CliConfig c;
  try {
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("data")) parse_data(j.at("data"), c.data);
    if (j.contains("synth")) from_json(j.at("synth"), c.synth);
    if (j.contains("pipeline")) from_json(j.at("pipeline"), c.pipeline);
    if (j.contains("baselines")) {
      const auto& b = j.at("baselines");
      if (b.contains("features")) c.baselines.features = parse_baseline_features(b.at("features").get<std::string>());
      c.baselines.lasso_lambda = b.value("lasso_lambda", c.baselines.lasso_lambda);
      c.baselines.lasso_tol = b.value("lasso_tol", c.baselines.lasso_tol);
      c.baselines.lasso_max_iter = b.value("lasso_max_iter", c.baselines.lasso_max_iter);
      if (!(c.baselines.lasso_lambda >= 0.0)) throw ConfigError("baselines.lasso_lambda must be >= 0");
    }
    if (j.contains("explain")) {
      const auto& e = j.at("explain");
      c.explain.n_points = e.value("n_points", c.explain.n_points);
      if (e.contains("range")) c.explain.range = parse_range_policy(e.at("range").get<std::string>());
      c.explain.phases = e.value("phases", c.explain.phases);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
  c.pipeline.stage1.validate();
  c.pipeline.stage2.validate();
  c.pipeline.split.validate();
  return c;
}

CliConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const CliConfig& c) {
  json data{{"path", c.data.path},
            {"variables", c.data.variables},
            {"max_length", c.data.max_length},
            {"length_policy", c.data.length_policy == LengthPolicy::Drop ? "drop" : "error"}};
  data["label_range"] = c.data.label_range ? json{c.data.label_range->lo, c.data.label_range->hi} : json(nullptr);
  return json{{"seed", c.seed ? json(*c.seed) : json(nullptr)},
              {"data", data},
              {"synth", c.synth},
              {"pipeline", c.pipeline},
              {"baselines",
               {{"features", c.baselines.features == BaselineFeatures::Frequency ? "frequency" : "dc-only"},
                {"lasso_lambda", c.baselines.lasso_lambda},
                {"lasso_tol", c.baselines.lasso_tol},
                {"lasso_max_iter", c.baselines.lasso_max_iter}}},
              {"explain",
               {{"n_points", c.explain.n_points},
                {"range", c.explain.range == RangePolicy::Data ? "data" : "grid"},
                {"phases", c.explain.phases}}}};
}

std::string to_string(SeedSource source) {
  switch (source) {
    case SeedSource::Flag: return "flag";
    case SeedSource::Config: return "config";
    case SeedSource::Environment: return "env";
    case SeedSource::Default: return "default";
  }
  return "default";
}

ResolvedSeed resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config,
                          const char* env_value) {
  if (flag) return {*flag, SeedSource::Flag};
  if (config) return {*config, SeedSource::Config};
  if (env_value != nullptr && *env_value != '\0') {
    const std::string_view text(env_value);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw ConfigError("TSKAN_SEED must be an unsigned integer, got '" + std::string(text) + "'");
    return {v, SeedSource::Environment};
  }
  return {0, SeedSource::Default};
}

void apply_seed(CliConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.synth.seed = seed;
  config.pipeline.split.seed = seed;
  config.pipeline.stage1.seed = derive_seed(seed, 1);
  config.pipeline.stage2.seed = derive_seed(seed, 2);
}

}  // namespace tskan::cli
