#include "tskan/kan_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tskan/error.hpp"
#include "tskan/rng.hpp"
#include "tskan/timeseries_data.hpp"

namespace tskan {

double silu(double x) {
  if (x >= 0.0) return x / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return x * e / (1.0 + e);
}

void SplineActivation::validate() const {
  validate_grid(grid, degree);
  if (coefficients.size() != basis_count(grid.size(), degree)) {
    throw DataError("activation '" + input_name + "' has " + std::to_string(coefficients.size()) +
                    " coefficients, expected " + std::to_string(basis_count(grid.size(), degree)));
  }
  for (const double c : coefficients)
    if (!std::isfinite(c)) throw DataError("activation '" + input_name + "' has a non-finite coefficient");
  if (!std::isfinite(base_weight)) throw DataError("activation '" + input_name + "' has a non-finite base weight");
}

double SplineActivation::spline(double x) const {
  const BasisWeights b = bspline_basis(x, grid, degree);
  double s = 0.0;
  for (int r = 0; r < b.count; ++r)
    s += coefficients[b.first + static_cast<std::size_t>(r)] * b.weights[static_cast<std::size_t>(r)];
  return s;
}

double SplineActivation::operator()(double x) const { return spline(x) + base_weight * silu(x); }

double eval_activation(const SplineActivation& a, double x) { return a(x); }

std::vector<std::string> KanModel::input_names() const {
  std::vector<std::string> names;
  names.reserve(activations.size());
  for (const auto& a : activations) names.push_back(a.input_name);
  return names;
}

void KanModel::validate() const {
  for (const auto& a : activations) a.validate();
  if (!std::isfinite(output_bias)) throw DataError("model bias is not finite");
}

double KanModel::predict(std::span<const double> features) const {
  if (features.size() != activations.size()) {
    throw DataError("model expects " + std::to_string(activations.size()) + " features, got " +
                    std::to_string(features.size()));
  }
  double y = output_bias;
  for (std::size_t q = 0; q < activations.size(); ++q) y += activations[q](features[q]);
  return y;  // outer transform is the identity
}

double forward(const KanModel& model, std::span<const double> features) { return model.predict(features); }

std::size_t headline_parameter_count(const KanModel& model) {
  std::size_t n = 0;
  for (const auto& a : model.activations) n += a.coefficients.size() + 1;
  return n;
}

std::size_t count_parameters(const KanModel& model) { return headline_parameter_count(model) + 1; }

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be >= 0");
  if (!(smoothness_weight >= 0.0) || !(sparsity_weight >= 0.0))
    throw ConfigError("regularization weights must be >= 0");
  if (grid_size < 1) throw ConfigError("grid_size must be >= 1");
  if (degree < 1 || degree > kMaxSplineDegree) throw ConfigError("degree must be in [1, 5]");
  if (!(grid_quantile_lo >= 0.0 && grid_quantile_lo < grid_quantile_hi && grid_quantile_hi <= 1.0))
    throw ConfigError("grid quantiles must satisfy 0 <= lo < hi <= 1");
  if (!(grid_margin >= 0.0)) throw ConfigError("grid_margin must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0 && adam_epsilon > 0.0))
    throw ConfigError("invalid Adam constants");
}

KanModel init_model(const Matrix& features, std::span<const double> targets,
                    const std::vector<std::string>& names, const TrainConfig& cfg) {
  cfg.validate();
  if (features.rows() == 0) throw DataError("cannot initialize a model without training rows");
  if (targets.size() != features.rows()) throw DataError("feature/target row count mismatch");
  if (names.size() != features.cols()) throw DataError("feature name count does not match column count");

  Rng rng(cfg.seed);
  KanModel model;
  for (std::size_t c = 0; c < features.cols(); ++c) {
    auto col = features.column(c);
    std::sort(col.begin(), col.end());
    double lo = quantile_sorted(col, cfg.grid_quantile_lo);
    double hi = quantile_sorted(col, cfg.grid_quantile_hi);
    const double span = hi - lo;
    if (span < 1e-9) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      lo -= cfg.grid_margin * span;
      hi += cfg.grid_margin * span;
    }
    SplineActivation a;
    a.grid = uniform_grid(lo, hi, cfg.grid_size);
    a.degree = cfg.degree;
    a.coefficients.resize(basis_count(a.grid.size(), a.degree));
    for (double& v : a.coefficients) v = rng.uniform(-1e-2, 1e-2);
    a.base_weight = 1.0;
    a.input_name = names[c];
    model.activations.push_back(std::move(a));
  }
  model.output_bias = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(targets.size());
  return model;
}

namespace {

// Basis weights and base-term values of every (sample, activation) pair. The
// grids do not change during training, so these are computed once.
class DesignCache {
 public:
  DesignCache(const KanModel& model, const Matrix& features) : rows_(features.rows()), cols_(features.cols()) {
    if (cols_ != model.activations.size()) {
      throw DataError("model expects " + std::to_string(model.activations.size()) + " features, got " +
                      std::to_string(cols_));
    }
    basis_.resize(rows_ * cols_);
    base_.resize(rows_ * cols_);
    for (std::size_t n = 0; n < rows_; ++n) {
      for (std::size_t q = 0; q < cols_; ++q) {
        const auto& a = model.activations[q];
        const double x = features(n, q);
        basis_[n * cols_ + q] = bspline_basis(x, a.grid, a.degree);
        base_[n * cols_ + q] = silu(x);
      }
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double activation(const KanModel& model, std::size_t n, std::size_t q) const {
    const auto& a = model.activations[q];
    const BasisWeights& b = basis_[n * cols_ + q];
    double s = a.base_weight * base_[n * cols_ + q];
    for (int r = 0; r < b.count; ++r)
      s += a.coefficients[b.first + static_cast<std::size_t>(r)] * b.weights[static_cast<std::size_t>(r)];
    return s;
  }

  const BasisWeights& basis(std::size_t n, std::size_t q) const { return basis_[n * cols_ + q]; }
  double base(std::size_t n, std::size_t q) const { return base_[n * cols_ + q]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<BasisWeights> basis_;
  std::vector<double> base_;
};

double smoothness_penalty(const KanModel& model) {
  double s = 0.0;
  for (const auto& a : model.activations) {
    const auto& c = a.coefficients;
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
      const double d = c[i - 1] - 2.0 * c[i] + c[i + 1];
      s += d * d;
    }
  }
  return s;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct Evaluation {
  double loss = 0.0;
  ModelGradient grad;
};

// Loss and (optionally) gradient over a cached batch. Summation order is fixed
// (samples ascending, then activations ascending).
Evaluation evaluate(const KanModel& model, const DesignCache& cache, std::span<const double> targets,
                    const TrainConfig& cfg, bool with_gradient) {
  const std::size_t n_rows = cache.rows();
  const std::size_t n_act = cache.cols();
  if (n_rows == 0) throw DataError("loss of an empty batch");
  if (targets.size() != n_rows) throw DataError("feature/target row count mismatch");
  const double inv_n = 1.0 / static_cast<double>(n_rows);

  Evaluation ev;
  if (with_gradient) {
    ev.grad.coefficients.resize(n_act);
    for (std::size_t q = 0; q < n_act; ++q)
      ev.grad.coefficients[q].assign(model.activations[q].coefficients.size(), 0.0);
    ev.grad.base_weights.assign(n_act, 0.0);
  }

  std::vector<double> psi(n_act);
  double sse = 0.0;
  double abs_sum = 0.0;
  for (std::size_t n = 0; n < n_rows; ++n) {
    double y = model.output_bias;
    for (std::size_t q = 0; q < n_act; ++q) {
      psi[q] = cache.activation(model, n, q);
      y += psi[q];
      abs_sum += std::abs(psi[q]);
    }
    const double e = y - targets[n];
    sse += e * e;
    if (!with_gradient) continue;

    ev.grad.bias += 2.0 * e * inv_n;
    for (std::size_t q = 0; q < n_act; ++q) {
      const double g = (2.0 * e + cfg.sparsity_weight * sign(psi[q])) * inv_n;
      const BasisWeights& b = cache.basis(n, q);
      auto& gc = ev.grad.coefficients[q];
      for (int r = 0; r < b.count; ++r)
        gc[b.first + static_cast<std::size_t>(r)] += g * b.weights[static_cast<std::size_t>(r)];
      ev.grad.base_weights[q] += g * cache.base(n, q);
    }
  }
  ev.loss = sse * inv_n + cfg.smoothness_weight * smoothness_penalty(model) + cfg.sparsity_weight * abs_sum * inv_n;

  if (with_gradient && cfg.smoothness_weight > 0.0) {
    for (std::size_t q = 0; q < n_act; ++q) {
      const auto& c = model.activations[q].coefficients;
      auto& gc = ev.grad.coefficients[q];
      for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        const double d = 2.0 * cfg.smoothness_weight * (c[i - 1] - 2.0 * c[i] + c[i + 1]);
        gc[i - 1] += d;
        gc[i] -= 2.0 * d;
        gc[i + 1] += d;
      }
    }
  }
  return ev;
}

double rmse_cached(const KanModel& model, const DesignCache& cache, std::span<const double> targets) {
  double sse = 0.0;
  for (std::size_t n = 0; n < cache.rows(); ++n) {
    double y = model.output_bias;
    for (std::size_t q = 0; q < cache.cols(); ++q) y += cache.activation(model, n, q);
    const double e = y - targets[n];
    sse += e * e;
  }
  return std::sqrt(sse / static_cast<double>(cache.rows()));
}

}  // namespace

double loss(const KanModel& model, const Matrix& features, std::span<const double> targets,
            const TrainConfig& cfg) {
  const DesignCache cache(model, features);
  return evaluate(model, cache, targets, cfg, false).loss;
}

ModelGradient gradients(const KanModel& model, const Matrix& features, std::span<const double> targets,
                        const TrainConfig& cfg) {
  const DesignCache cache(model, features);
  return evaluate(model, cache, targets, cfg, true).grad;
}

std::vector<double> ModelGradient::flat() const {
  std::vector<double> out;
  for (std::size_t q = 0; q < coefficients.size(); ++q) {
    out.insert(out.end(), coefficients[q].begin(), coefficients[q].end());
    out.push_back(base_weights[q]);
  }
  out.push_back(bias);
  return out;
}

std::vector<double> flatten_parameters(const KanModel& model) {
  std::vector<double> out;
  out.reserve(count_parameters(model));
  for (const auto& a : model.activations) {
    out.insert(out.end(), a.coefficients.begin(), a.coefficients.end());
    out.push_back(a.base_weight);
  }
  out.push_back(model.output_bias);
  return out;
}

void assign_parameters(KanModel& model, std::span<const double> params) {
  if (params.size() != count_parameters(model)) throw DataError("parameter vector has the wrong length");
  std::size_t i = 0;
  for (auto& a : model.activations) {
    for (double& c : a.coefficients) c = params[i++];
    a.base_weight = params[i++];
  }
  model.output_bias = params[i];
}

TrainResult train(KanModel model, const Matrix& train_x, std::span<const double> train_y,
                  const Matrix& val_x, std::span<const double> val_y, const TrainConfig& cfg) {
  cfg.validate();
  model.validate();
  if (train_x.rows() == 0 || val_x.rows() == 0) throw DataError("training and validation sets must be non-empty");
  if (val_y.size() != val_x.rows()) throw DataError("validation feature/target row count mismatch");

  const DesignCache train_cache(model, train_x);
  const DesignCache val_cache(model, val_x);

  std::vector<double> params = flatten_parameters(model);
  std::vector<double> m(params.size(), 0.0);
  std::vector<double> v(params.size(), 0.0);
  double beta1_pow = 1.0;
  double beta2_pow = 1.0;

  TrainResult result;
  result.model = model;
  double best = std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Evaluation ev = evaluate(model, train_cache, train_y, cfg, true);
    if (!std::isfinite(ev.loss)) {
      throw TrainingError("training diverged: loss is not finite at epoch " + std::to_string(epoch), epoch);
    }
    const double val = rmse_cached(model, val_cache, val_y);
    result.history.train_loss.push_back(ev.loss);
    result.history.val_rmse.push_back(val);
    if (val < best) {
      best = val;
      result.history.best_epoch = epoch;
      result.model = model;
    }
    if (cfg.early_stop_patience > 0 && epoch - result.history.best_epoch >= cfg.early_stop_patience) {
      result.history.early_stopped = true;
      break;
    }

    const std::vector<double> g = ev.grad.flat();
    beta1_pow *= cfg.adam_beta1;
    beta2_pow *= cfg.adam_beta2;
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
      v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
      const double m_hat = m[i] / (1.0 - beta1_pow);
      const double v_hat = v[i] / (1.0 - beta2_pow);
      params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
    }
    assign_parameters(model, params);
  }
  return result;
}

double ImportanceReport::alpha(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e.alpha;
  throw DataError("importance report has no feature '" + name + "'");
}

ImportanceReport importance_scores(const KanModel& model, const Matrix& features) {
  if (features.rows() == 0) throw DataError("importance over an empty data set");
  const DesignCache cache(model, features);
  std::vector<double> mean_abs(model.inputs(), 0.0);
  for (std::size_t q = 0; q < model.inputs(); ++q) {
    double s = 0.0;
    for (std::size_t n = 0; n < cache.rows(); ++n) s += std::abs(cache.activation(model, n, q));
    mean_abs[q] = s / static_cast<double>(cache.rows());
  }
  const double total = std::accumulate(mean_abs.begin(), mean_abs.end(), 0.0);

  ImportanceReport report;
  for (std::size_t q = 0; q < model.inputs(); ++q) {
    report.entries.push_back({model.activations[q].input_name, total > 0.0 ? mean_abs[q] / total : 0.0, 0});
  }
  std::sort(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
    if (a.alpha != b.alpha) return a.alpha > b.alpha;
    return a.name < b.name;
  });
  for (std::size_t i = 0; i < report.entries.size(); ++i) report.entries[i].rank = i + 1;
  return report;
}

}  // namespace tskan
