#include "tskan/timeseries_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "tskan/error.hpp"
#include "tskan/format.hpp"
#include "tskan/rng.hpp"

namespace tskan {

namespace {

// RFC 4180 style field split; quotes may wrap a field and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

struct PendingSample {
  std::string id;
  double label = 0.0;
  std::size_t first_line = 0;
  std::map<std::size_t, std::vector<double>> chunks;
};

}  // namespace

Dataset parse_dataset(const std::string& csv_text, const LoadOptions& options,
                      const std::string& source_name) {
  std::istringstream in(csv_text);
  std::string line;
  std::size_t line_no = 0;

  // Header.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    for (auto& h : split_csv_line(line)) header.push_back(trim(h));
    break;
  }
  if (header.empty()) throw DataError(source_name + ": missing CSV header");

  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!column_of.emplace(header[c], c).second)
      throw DataError(source_name + ": duplicate column '" + header[c] + "'");
  }
  const auto require = [&](const std::string& name) {
    const auto it = column_of.find(name);
    if (it == column_of.end()) throw DataError(source_name + ": missing column '" + name + "'");
    return it->second;
  };
  const std::size_t id_col = require("sample_id");
  const std::size_t chunk_col = require("chunk_index");
  std::optional<std::size_t> mos_col;
  if (options.require_label || column_of.contains("mos")) mos_col = require("mos");

  std::vector<std::string> variables = options.schema;
  if (variables.empty()) {
    for (const auto& h : header)
      if (h != "sample_id" && h != "chunk_index" && h != "mos") variables.push_back(h);
  }
  if (variables.empty()) throw DataError(source_name + ": no variable columns");
  {
    std::set<std::string> seen;
    for (const auto& v : variables)
      if (!seen.insert(v).second) throw DataError(source_name + ": duplicate variable '" + v + "'");
  }
  std::vector<std::size_t> var_cols;
  for (const auto& v : variables) var_cols.push_back(require(v));

  std::vector<PendingSample> pending;
  std::unordered_map<std::string, std::size_t> pending_of;

  const auto cell_number = [&](const std::vector<std::string>& fields, std::size_t col) {
    double v = 0.0;
    if (!parse_number(fields[col], v)) {
      throw DataError(source_name + ": line " + std::to_string(line_no) + ", column '" +
                      header[col] + "': non-numeric value '" + fields[col] + "'");
    }
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError(source_name + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
    const std::string id = trim(fields[id_col]);
    if (id.empty()) throw DataError(source_name + ": line " + std::to_string(line_no) + ": empty sample_id");

    const double chunk_value = cell_number(fields, chunk_col);
    if (chunk_value < 0 || chunk_value != std::floor(chunk_value)) {
      throw DataError(source_name + ": line " + std::to_string(line_no) +
                      ": chunk_index must be a non-negative integer");
    }
    const auto chunk = static_cast<std::size_t>(chunk_value);
    const double mos = mos_col ? cell_number(fields, *mos_col) : 0.0;

    std::vector<double> row;
    row.reserve(var_cols.size());
    for (const std::size_t c : var_cols) row.push_back(cell_number(fields, c));

    auto [it, inserted] = pending_of.emplace(id, pending.size());
    if (inserted) pending.push_back(PendingSample{id, mos, line_no, {}});
    PendingSample& s = pending[it->second];
    if (s.label != mos) {
      throw DataError(source_name + ": line " + std::to_string(line_no) + ": mos for sample '" + id +
                      "' differs from its first row (line " + std::to_string(s.first_line) + ")");
    }
    if (!s.chunks.emplace(chunk, std::move(row)).second) {
      throw DataError(source_name + ": line " + std::to_string(line_no) + ": duplicate (sample_id, chunk_index) = (" +
                      id + ", " + std::to_string(chunk) + ")");
    }
  }

  Dataset ds;
  ds.variable_names = variables;
  std::set<std::size_t> lengths;
  for (auto& p : pending) {
    const std::size_t T = p.chunks.size();
    if (p.chunks.rbegin()->first != T - 1) {
      throw DataError(source_name + ": sample '" + p.id + "' has non-contiguous chunk_index values");
    }
    if (mos_col && options.label_range && (p.label < options.label_range->lo || p.label > options.label_range->hi)) {
      throw DataError(source_name + ": sample '" + p.id + "' label " + format_number(p.label) +
                      " outside [" + format_number(options.label_range->lo) + ", " +
                      format_number(options.label_range->hi) + "]");
    }
    TimeSeriesSample sample{p.id, Matrix(variables.size(), T), p.label};
    for (const auto& [t, row] : p.chunks)
      for (std::size_t v = 0; v < row.size(); ++v) sample.values(v, t) = row[v];
    lengths.insert(T);
    ds.samples.push_back(std::move(sample));
  }
  ds.target_length = lengths.size() == 1 ? *lengths.begin() : 0;
  return ds;
}

Dataset load_dataset(const std::string& path, const LoadOptions& options) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    // Unreadable inputs are reported as data errors (exit code 3).
    throw DataError(e.what());
  }
  return parse_dataset(text, options, path);
}

std::string dataset_to_csv(const Dataset& ds) {
  std::string out = "sample_id,chunk_index";
  for (const auto& v : ds.variable_names) out += "," + v;
  out += ",mos\n";
  for (const auto& s : ds.samples) {
    const std::string label = format_number(s.label, 17);
    for (std::size_t t = 0; t < s.length(); ++t) {
      out += s.sample_id;
      out += ',';
      out += std::to_string(t);
      for (std::size_t v = 0; v < s.variables(); ++v) {
        out += ',';
        out += format_number(s.values(v, t), 17);
      }
      out += ',';
      out += label;
      out += '\n';
    }
  }
  return out;
}

LengthReport enforce_length(const Dataset& ds, std::size_t max_length, LengthPolicy policy) {
  if (max_length == 0) throw ConfigError("max length must be >= 1");
  LengthReport report;
  report.dataset.variable_names = ds.variable_names;
  report.dataset.target_length = max_length;
  for (const auto& s : ds.samples) {
    if (s.length() > max_length) {
      if (policy == LengthPolicy::Error) {
        throw DataError("sample '" + s.sample_id + "' has " + std::to_string(s.length()) +
                        " chunks, more than the maximum " + std::to_string(max_length));
      }
      ++report.dropped;
      continue;
    }
    if (s.length() < max_length) {
      throw DataError("sample '" + s.sample_id + "' has " + std::to_string(s.length()) +
                      " chunks, fewer than the required " + std::to_string(max_length));
    }
    report.dataset.samples.push_back(s);
  }
  return report;
}

void SplitSpec::validate() const {
  const double fr[] = {train_fraction, val_fraction, test_fraction};
  for (const double f : fr)
    if (!(f > 0.0)) throw ConfigError("split fractions must be positive");
  if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
    throw ConfigError("split fractions must sum to 1");
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec) {
  spec.validate();
  if (n < 3) throw DataError("need at least 3 samples to split, got " + std::to_string(n));
  const auto part = [n](double f) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * f)));
  };
  const std::size_t val = part(spec.val_fraction);
  const std::size_t test = part(spec.test_fraction);
  if (val + test >= n) {
    throw DataError("split of " + std::to_string(n) + " samples leaves the training part empty");
  }
  return {n - val - test, val, test};
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  const auto [n_train, n_val, n_test] = split_sizes(n, spec);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                 order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  (void)n_test;
  return out;
}

Dataset select_samples(const Dataset& ds, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.variable_names = ds.variable_names;
  out.target_length = ds.target_length;
  out.samples.reserve(indices.size());
  for (const std::size_t i : indices) out.samples.push_back(ds.samples.at(i));
  return out;
}

DatasetSplit split_dataset(const Dataset& ds, const SplitSpec& spec) {
  const auto idx = split_indices(ds.size(), spec);
  return {select_samples(ds, idx.train), select_samples(ds, idx.val), select_samples(ds, idx.test)};
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

ScalerParams fit_robust_scaler(const Matrix& features, std::vector<std::string> feature_names) {
  if (features.rows() == 0 || features.cols() == 0) throw DataError("cannot fit scaler on an empty matrix");
  if (features.rows() < 2) throw DataError("robust scaler needs at least 2 rows");
  if (!feature_names.empty() && feature_names.size() != features.cols())
    throw DataError("feature name count does not match column count");

  ScalerParams p;
  p.feature_names = std::move(feature_names);
  for (std::size_t c = 0; c < features.cols(); ++c) {
    auto col = features.column(c);
    for (const double v : col)
      if (!std::isfinite(v)) throw DataError("non-finite value in scaler input column " + std::to_string(c));
    std::sort(col.begin(), col.end());
    const double iqr = quantile_sorted(col, 0.75) - quantile_sorted(col, 0.25);
    p.center.push_back(quantile_sorted(col, 0.5));
    p.scale.push_back(iqr < kScaleFloor ? 1.0 : iqr);
  }
  return p;
}

namespace {
void check_columns(const ScalerParams& params, const Matrix& m) {
  if (m.cols() != params.size()) {
    throw DataError("scaler expects " + std::to_string(params.size()) + " columns, got " +
                    std::to_string(m.cols()));
  }
}
}  // namespace

Matrix apply_scaler(const ScalerParams& params, const Matrix& features) {
  check_columns(params, features);
  Matrix out(features.rows(), features.cols());
  for (std::size_t r = 0; r < features.rows(); ++r)
    for (std::size_t c = 0; c < features.cols(); ++c)
      out(r, c) = (features(r, c) - params.center[c]) / params.scale[c];
  return out;
}

Matrix invert_scaler(const ScalerParams& params, const Matrix& scaled) {
  check_columns(params, scaled);
  Matrix out(scaled.rows(), scaled.cols());
  for (std::size_t r = 0; r < scaled.rows(); ++r)
    for (std::size_t c = 0; c < scaled.cols(); ++c)
      out(r, c) = scaled(r, c) * params.scale[c] + params.center[c];
  return out;
}

ScalerParams ScalerParams::subset(const std::vector<std::string>& names) const {
  ScalerParams out;
  for (const auto& name : names) {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) throw DataError("scaler has no feature '" + name + "'");
    const auto i = static_cast<std::size_t>(it - feature_names.begin());
    out.center.push_back(center[i]);
    out.scale.push_back(scale[i]);
    out.feature_names.push_back(name);
  }
  return out;
}

void to_json(nlohmann::json& j, const ScalerParams& p) {
  j = nlohmann::json{{"center", p.center}, {"scale", p.scale}, {"feature_names", p.feature_names}};
}

void from_json(const nlohmann::json& j, ScalerParams& p) {
  j.at("center").get_to(p.center);
  j.at("scale").get_to(p.scale);
  if (j.contains("feature_names")) j.at("feature_names").get_to(p.feature_names);
  if (p.center.size() != p.scale.size())
    throw DataError("scaler center/scale length mismatch");
  if (!p.feature_names.empty() && p.feature_names.size() != p.center.size())
    throw DataError("scaler feature_names length mismatch");
  for (const double s : p.scale)
    if (!(s > 0.0)) throw DataError("scaler scale must be positive");
}

}  // namespace tskan
