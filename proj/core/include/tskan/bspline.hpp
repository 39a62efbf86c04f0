#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tskan {

inline constexpr int kMaxSplineDegree = 5;

/// The non-zero B-spline basis values at one point: basis functions
/// first .. first + count - 1 with the given weights.
struct BasisWeights {
  std::size_t first = 0;
  int count = 0;
  std::array<double, kMaxSplineDegree + 1> weights{};

  double sum() const {
    double s = 0.0;
    for (int r = 0; r < count; ++r) s += weights[static_cast<std::size_t>(r)];
    return s;
  }
};

/// A grid of G + 1 strictly increasing points spans G intervals and supports
/// G + degree basis functions. The knot vector is extended by `degree` knots
/// on each side, spaced like the first and last interval respectively.
std::size_t basis_count(std::size_t grid_points, int degree);

/// Throws DataError for fewer than 2 points, non-finite or non-increasing
/// points, or a degree outside [1, kMaxSplineDegree].
void validate_grid(std::span<const double> grid, int degree);

/// Cox-de Boor evaluation of the degree+1 basis functions that can be
/// non-zero at x. Inside [grid.front(), grid.back()] the weights form a
/// partition of unity. Outside, each weight is continued linearly from the
/// nearest boundary point (value + slope * distance), so any spline built on
/// the basis extrapolates linearly.
BasisWeights bspline_basis(double x, std::span<const double> grid, int degree);

/// `intervals + 1` evenly spaced points from lo to hi (endpoints exact).
std::vector<double> uniform_grid(double lo, double hi, std::size_t intervals);

}  // namespace tskan
