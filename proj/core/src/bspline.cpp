#include "tskan/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tskan/error.hpp"

namespace tskan {

namespace {

// Extended knot t_i, i in [0, G + 2p]; t_{p + j} = grid[j].
double knot(std::span<const double> grid, int degree, std::ptrdiff_t i) {
  const auto g = static_cast<std::ptrdiff_t>(grid.size()) - 1;
  if (i < degree) {
    const double h = grid[1] - grid[0];
    return grid[0] - static_cast<double>(degree - i) * h;
  }
  if (i > g + degree) {
    const double h = grid[static_cast<std::size_t>(g)] - grid[static_cast<std::size_t>(g - 1)];
    return grid[static_cast<std::size_t>(g)] + static_cast<double>(i - g - degree) * h;
  }
  return grid[static_cast<std::size_t>(i - degree)];
}

// The degree+1 non-zero basis values of the given degree on knot span `span`
// (t_span <= x <= t_{span+1}), via the triangular Cox-de Boor scheme.
void basis_on_span(double x, std::span<const double> grid, int knot_degree, std::ptrdiff_t span,
                   int degree, double* out) {
  std::array<double, kMaxSplineDegree + 2> left{};
  std::array<double, kMaxSplineDegree + 2> right{};
  out[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[static_cast<std::size_t>(j)] = x - knot(grid, knot_degree, span + 1 - j);
    right[static_cast<std::size_t>(j)] = knot(grid, knot_degree, span + j) - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
      const double temp = out[r] / denom;
      out[r] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    out[j] = saved;
  }
}

}  // namespace

std::size_t basis_count(std::size_t grid_points, int degree) {
  return grid_points - 1 + static_cast<std::size_t>(degree);
}

void validate_grid(std::span<const double> grid, int degree) {
  if (degree < 1 || degree > kMaxSplineDegree)
    throw DataError("spline degree " + std::to_string(degree) + " outside [1, " +
                    std::to_string(kMaxSplineDegree) + "]");
  if (grid.size() < 2) throw DataError("spline grid needs at least 2 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw DataError("spline grid contains a non-finite point");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DataError("spline grid is not strictly increasing");
  }
}

BasisWeights bspline_basis(double x, std::span<const double> grid, int degree) {
  validate_grid(grid, degree);
  if (!std::isfinite(x)) throw DataError("spline input is not finite");

  const std::size_t intervals = grid.size() - 1;
  const double lo = grid.front();
  const double hi = grid.back();
  const double at = std::clamp(x, lo, hi);

  // Interval j with grid[j] <= at < grid[j+1]; the right end belongs to the last one.
  std::size_t j = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), at) - grid.begin());
  j = j == 0 ? 0 : j - 1;
  if (j >= intervals) j = intervals - 1;
  const auto span = static_cast<std::ptrdiff_t>(j) + degree;

  BasisWeights out;
  out.first = j;
  out.count = degree + 1;
  basis_on_span(at, grid, degree, span, degree, out.weights.data());

  const double dx = x - at;
  if (dx != 0.0) {
    // Slopes of the basis at the boundary from the degree-1 lower basis:
    // N'_{i,p} = p N_{i,p-1} / (t_{i+p} - t_i) - p N_{i+1,p-1} / (t_{i+p+1} - t_{i+1}).
    std::array<double, kMaxSplineDegree + 1> lower{};
    basis_on_span(at, grid, degree, span, degree - 1, lower.data());
    const double p = degree;
    for (int r = 0; r <= degree; ++r) {
      const std::ptrdiff_t i = span - degree + r;
      double slope = 0.0;
      if (r >= 1)
        slope += p * lower[static_cast<std::size_t>(r - 1)] / (knot(grid, degree, i + degree) - knot(grid, degree, i));
      if (r <= degree - 1)
        slope -= p * lower[static_cast<std::size_t>(r)] /
                 (knot(grid, degree, i + degree + 1) - knot(grid, degree, i + 1));
      out.weights[static_cast<std::size_t>(r)] += slope * dx;
    }
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t intervals) {
  if (intervals == 0) throw ConfigError("grid needs at least one interval");
  if (!(hi > lo)) throw ConfigError("grid range must satisfy lo < hi");
  std::vector<double> g(intervals + 1);
  const double h = (hi - lo) / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) g[i] = lo + h * static_cast<double>(i);
  g.back() = hi;
  return g;
}

}  // namespace tskan
