#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tskan/bspline.hpp"
#include "tskan/matrix.hpp"

namespace tskan {

/// x * sigmoid(x), evaluated without overflow for large |x|.
double silu(double x);

/// One learned univariate function
///   psi(x) = sum_i coefficients[i] * B_i(x) + base_weight * silu(x)
/// over a B-spline basis on `grid`.
struct SplineActivation {
  std::vector<double> grid;
  int degree = 3;
  std::vector<double> coefficients;
  double base_weight = 0.0;
  std::string input_name;

  std::size_t grid_intervals() const noexcept { return grid.empty() ? 0 : grid.size() - 1; }
  /// Throws DataError when the grid, degree or coefficient count is inconsistent.
  void validate() const;
  /// Spline part only (base term excluded).
  double spline(double x) const;
  double operator()(double x) const;

  friend bool operator==(const SplineActivation&, const SplineActivation&) = default;
};

double eval_activation(const SplineActivation& a, double x);

/// Outer function applied to the summed activations. The one-layer model
/// only uses the identity.
enum class OuterTransform { Identity };

/// y = bias + sum_q psi_q(u_q).
struct KanModel {
  std::vector<SplineActivation> activations;
  double output_bias = 0.0;
  OuterTransform outer = OuterTransform::Identity;

  std::size_t inputs() const noexcept { return activations.size(); }
  std::vector<std::string> input_names() const;
  void validate() const;
  double predict(std::span<const double> features) const;

  friend bool operator==(const KanModel&, const KanModel&) = default;
};

/// Throws DataError on a feature-count mismatch.
double forward(const KanModel& model, std::span<const double> features);

/// Trainable parameters including the output bias.
std::size_t count_parameters(const KanModel& model);
/// Per-activation parameters only (coefficients + base weight); this is the
/// figure comparable to published parameter counts.
std::size_t headline_parameter_count(const KanModel& model);

struct TrainConfig {
  std::size_t epochs = 2000;
  double learning_rate = 1e-2;
  /// Weight of sum over activations of squared second differences of coefficients.
  double smoothness_weight = 0.0;
  /// Weight of sum over activations of mean |psi_q(u_q)| over the batch.
  double sparsity_weight = 0.0;
  std::uint64_t seed = 0;
  /// Stop after this many epochs without a new best validation RMSE (0 disables).
  std::size_t early_stop_patience = 200;
  std::size_t grid_size = 8;
  int degree = 3;
  double grid_quantile_lo = 0.01;
  double grid_quantile_hi = 0.99;
  /// Fraction of the quantile span added on each side of the grid.
  double grid_margin = 0.1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  /// Throws ConfigError. A learning rate of exactly 0 is accepted (frozen run).
  void validate() const;
};

/// Fresh model over the columns of `features`: per-feature grid spanning the
/// configured training quantiles plus margin, coefficients uniform in
/// [-1e-2, 1e-2] drawn from cfg.seed, base weights 1, bias = mean(targets).
KanModel init_model(const Matrix& features, std::span<const double> targets,
                    const std::vector<std::string>& names, const TrainConfig& cfg);

/// MSE + smoothness and sparsity penalties.
double loss(const KanModel& model, const Matrix& features, std::span<const double> targets,
            const TrainConfig& cfg);

/// Partial derivatives of loss() with the same layout as the model. The
/// sparsity term uses sign(0) = 0.
struct ModelGradient {
  std::vector<std::vector<double>> coefficients;
  std::vector<double> base_weights;
  double bias = 0.0;

  std::vector<double> flat() const;
};

ModelGradient gradients(const KanModel& model, const Matrix& features, std::span<const double> targets,
                        const TrainConfig& cfg);

/// Parameter vector in the order: per activation (coefficients..., base_weight),
/// then bias. Matches ModelGradient::flat().
std::vector<double> flatten_parameters(const KanModel& model);
void assign_parameters(KanModel& model, std::span<const double> params);

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_rmse;
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

struct TrainResult {
  KanModel model;
  TrainHistory history;
};

/// Full-batch Adam. Each epoch records the training loss and validation RMSE
/// of the current parameters before stepping; the parameters of the epoch with
/// the lowest validation RMSE are returned. Throws TrainingError when the loss
/// becomes non-finite.
TrainResult train(KanModel model, const Matrix& train_x, std::span<const double> train_y,
                  const Matrix& val_x, std::span<const double> val_y, const TrainConfig& cfg);

struct ImportanceEntry {
  std::string name;
  double alpha = 0.0;
  std::size_t rank = 0;  ///< 1-based

  friend bool operator==(const ImportanceEntry&, const ImportanceEntry&) = default;
};

/// Entries in rank order (descending alpha, ties by name).
struct ImportanceReport {
  std::vector<ImportanceEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  double alpha(const std::string& name) const;

  friend bool operator==(const ImportanceReport&, const ImportanceReport&) = default;
};

/// alpha_j = mean_n |psi_j(u_nj)|, normalized to sum to 1 (all zeros stay 0).
ImportanceReport importance_scores(const KanModel& model, const Matrix& features);

}  // namespace tskan
