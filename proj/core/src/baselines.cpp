#include "tskan/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "tskan/error.hpp"
#include "tskan/spectral_features.hpp"

namespace tskan {

double LinearModel::predict(std::span<const double> features) const {
  if (features.size() != weights.size()) {
    throw DataError("linear model expects " + std::to_string(weights.size()) + " features, got " +
                    std::to_string(features.size()));
  }
  double y = intercept;
  for (std::size_t j = 0; j < weights.size(); ++j) y += weights[j] * features[j];
  return y;
}

namespace {

struct Centred {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd x_mean;
  double y_mean = 0.0;
};

Centred centre(const Matrix& x, std::span<const double> y) {
  if (x.rows() == 0) throw DataError("cannot fit on an empty design");
  if (y.size() != x.rows()) throw DataError("design/target row count mismatch");
  Centred c;
  c.x.resize(static_cast<Eigen::Index>(x.rows()), static_cast<Eigen::Index>(x.cols()));
  c.y.resize(static_cast<Eigen::Index>(x.rows()));
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (!std::isfinite(x(r, j))) throw DataError("design contains a non-finite value");
      c.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = x(r, j);
    }
    if (!std::isfinite(y[r])) throw DataError("targets contain a non-finite value");
    c.y(static_cast<Eigen::Index>(r)) = y[r];
  }
  c.x_mean = c.x.colwise().mean().transpose();
  c.y_mean = c.y.mean();
  c.x.rowwise() -= c.x_mean.transpose();
  c.y.array() -= c.y_mean;
  return c;
}

std::vector<std::string> default_names(std::vector<std::string> names, std::size_t cols) {
  if (names.empty()) {
    for (std::size_t j = 0; j < cols; ++j) names.push_back("x" + std::to_string(j));
  }
  if (names.size() != cols) throw DataError("feature name count does not match column count");
  return names;
}

}  // namespace

LinearModel fit_linear_regression(const Matrix& x, std::span<const double> y, std::vector<std::string> names) {
  const Centred c = centre(x, y);
  LinearModel model;
  model.feature_names = default_names(std::move(names), x.cols());
  if (x.cols() > 0 && c.x.cwiseAbs().maxCoeff() == 0.0)
    throw DataError("degenerate design: every column is constant");

  const auto d = static_cast<Eigen::Index>(x.cols());
  Eigen::MatrixXd gram = c.x.transpose() * c.x;
  gram += 1e-10 * Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd w = gram.ldlt().solve(c.x.transpose() * c.y);
  model.weights.assign(w.data(), w.data() + w.size());
  model.intercept = c.y_mean - c.x_mean.dot(w);
  return model;
}

double soft_threshold(double value, double lambda) {
  if (value > lambda) return value - lambda;
  if (value < -lambda) return value + lambda;
  return 0.0;
}

LassoResult fit_lasso(const Matrix& x, std::span<const double> y, double lambda, double tol, std::size_t max_iter,
                      std::vector<std::string> names) {
  if (!(lambda >= 0.0)) throw ConfigError("lasso lambda must be >= 0");
  if (!(tol > 0.0) || max_iter == 0) throw ConfigError("lasso needs tol > 0 and max_iter >= 1");
  Centred c = centre(x, y);
  const auto d = c.x.cols();

  Eigen::VectorXd norms = c.x.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (norms(j) > 0.0) c.x.col(j) /= norms(j);
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd residual = c.y;
  const auto objective = [&] {
    return 0.5 * residual.squaredNorm() + lambda * beta.cwiseAbs().sum();
  };

  LassoResult result;
  for (std::size_t it = 0; it < max_iter; ++it) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (norms(j) == 0.0) continue;
      const double old = beta(j);
      const double rho = c.x.col(j).dot(residual) + old;
      const double updated = soft_threshold(rho, lambda);
      if (updated != old) {
        residual -= (updated - old) * c.x.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    result.iterations = it + 1;
    result.objective_history.push_back(objective());
    if (max_change < tol) {
      result.converged = true;
      break;
    }
  }

  result.model.feature_names = default_names(std::move(names), x.cols());
  result.model.weights.resize(static_cast<std::size_t>(d));
  double offset = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double w = norms(j) > 0.0 ? beta(j) / norms(j) : 0.0;
    result.model.weights[static_cast<std::size_t>(j)] = w;
    offset += c.x_mean(j) * w;
  }
  result.model.intercept = c.y_mean - offset;
  return result;
}

double lasso_objective(const LinearModel& model, const Matrix& x, std::span<const double> y, double lambda) {
  const Centred c = centre(x, y);
  double sse = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double e = y[r] - model.predict(x.row(r));
    sse += e * e;
  }
  double penalty = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j)
    penalty += c.x.col(static_cast<Eigen::Index>(j)).norm() * std::abs(model.weights[j]);
  return 0.5 * sse + lambda * penalty;
}

std::vector<std::string> baseline_feature_names(const std::vector<std::string>& names, BaselineFeatures mode) {
  if (mode == BaselineFeatures::Frequency) return names;
  std::vector<std::string> out;
  for (const auto& n : names) {
    const auto parsed = parse_feature_name(n);
    if (parsed && parsed->kind == FeatureKind::Magnitude && parsed->frequency == 0) out.push_back(n);
  }
  return out;
}

}  // namespace tskan
