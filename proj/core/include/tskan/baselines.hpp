#pragma once

#include <span>
#include <string>
#include <vector>

#include "tskan/matrix.hpp"

namespace tskan {

struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
  std::vector<std::string> feature_names;

  double predict(std::span<const double> features) const;
  /// Weight count; the intercept is not included.
  std::size_t parameter_count() const noexcept { return weights.size(); }

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

/// Least squares with intercept through the centred normal equations
/// (X'X + 1e-10 I) w = X'y. Throws DataError when every column is constant.
LinearModel fit_linear_regression(const Matrix& x, std::span<const double> y,
                                  std::vector<std::string> names = {});

struct LassoResult {
  LinearModel model;
  std::size_t iterations = 0;
  bool converged = false;
  /// Objective after each full coordinate sweep.
  std::vector<double> objective_history;
};

/// Minimizes 0.5 * ||y - Xw - b||^2 + lambda * sum_j s_j |w_j| with s_j the
/// norm of the centred column j. Internally each column is centred and scaled
/// to unit norm, cyclic coordinate descent with soft-thresholding runs until
/// the largest standardized coefficient change drops below `tol`, and the
/// weights are mapped back to original units. Constant columns get weight 0.
LassoResult fit_lasso(const Matrix& x, std::span<const double> y, double lambda, double tol = 1e-10,
                      std::size_t max_iter = 100000, std::vector<std::string> names = {});

/// The objective minimized by fit_lasso, evaluated for any linear model.
double lasso_objective(const LinearModel& model, const Matrix& x, std::span<const double> y, double lambda);

double soft_threshold(double value, double lambda);

/// Which frequency features a baseline consumes.
enum class BaselineFeatures { Frequency, DcOnly };

/// Filters frequency-feature names: DcOnly keeps M_<var>(0) only.
std::vector<std::string> baseline_feature_names(const std::vector<std::string>& names, BaselineFeatures mode);

}  // namespace tskan
