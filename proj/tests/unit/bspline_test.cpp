#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tskan/bspline.hpp"
#include "tskan/error.hpp"

namespace tskan {
namespace {

std::vector<double> dense(const BasisWeights& b, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (int r = 0; r < b.count; ++r) out[b.first + static_cast<std::size_t>(r)] = b.weights[static_cast<std::size_t>(r)];
  return out;
}

TEST(BsplineBasis, CubicMidpointWeights) {
  const auto grid = uniform_grid(0.0, 8.0, 8);
  const BasisWeights b = bspline_basis(3.5, grid, 3);
  ASSERT_EQ(b.count, 4);
  const double expected[] = {1.0 / 48, 23.0 / 48, 23.0 / 48, 1.0 / 48};
  const auto ref = oracle::basis_values(grid, 3, 3.5);
  for (int r = 0; r < 4; ++r) {
    const auto i = static_cast<std::size_t>(r);
    EXPECT_NEAR(b.weights[i], expected[r], 1e-12);
    EXPECT_NEAR(b.weights[i], ref[b.first + i], 1e-12);
  }
}

TEST(BsplineBasis, LinearHatPeakAtKnot) {
  const auto grid = uniform_grid(0.0, 4.0, 4);
  const auto w = dense(bspline_basis(2.0, grid, 1), basis_count(grid.size(), 1));
  // Degree 1: basis i peaks at grid point i - 1 + 1 = i (one extra knot on the left).
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], i == 2 ? 1.0 : 0.0, 1e-15) << i;
}

TEST(BsplineBasis, MatchesRecursiveOracleInside) {
  Rng rng(8);
  for (int degree = 1; degree <= kMaxSplineDegree; ++degree) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t g = 2 + rng.index(10);
      std::vector<double> grid{rng.uniform(-3, 0)};
      for (std::size_t i = 0; i < g; ++i) grid.push_back(grid.back() + rng.uniform(0.1, 1.0));
      const double x = rng.uniform(grid.front(), grid.back());
      const auto got = dense(bspline_basis(x, grid, degree), basis_count(grid.size(), degree));
      const auto ref = oracle::basis_values(grid, degree, x);
      ASSERT_EQ(got.size(), ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-12);
    }
  }
}

TEST(BsplineBasis, RightEndpointIsPartitionOfUnity) {
  const auto grid = uniform_grid(-1.0, 1.0, 8);
  EXPECT_NEAR(bspline_basis(1.0, grid, 3).sum(), 1.0, 1e-12);
  EXPECT_NEAR(bspline_basis(-1.0, grid, 3).sum(), 1.0, 1e-12);
}

TEST(BsplineBasis, ExtrapolationIsLinearInX) {
  const auto grid = uniform_grid(0.0, 1.0, 5);
  for (const double x0 : {1.5, -0.7}) {
    const BasisWeights a = bspline_basis(x0, grid, 3);
    const BasisWeights b = bspline_basis(x0 + 0.25, grid, 3);
    const BasisWeights c = bspline_basis(x0 + 0.5, grid, 3);
    ASSERT_EQ(a.first, c.first);
    for (int r = 0; r < a.count; ++r) {
      const auto i = static_cast<std::size_t>(r);
      EXPECT_NEAR(a.weights[i] - 2 * b.weights[i] + c.weights[i], 0.0, 1e-12);
    }
  }
}

TEST(BsplineBasis, ContinuousAtBoundary) {
  const auto grid = uniform_grid(0.0, 2.0, 4);
  const double eps = 1e-9;
  const auto in = dense(bspline_basis(2.0 - eps, grid, 3), 7);
  const auto out = dense(bspline_basis(2.0 + eps, grid, 3), 7);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(in[i], out[i], 1e-7);
}

TEST(BsplineBasis, MalformedGrid) {
  EXPECT_THROW(bspline_basis(0.0, std::vector<double>{0.0}, 3), DataError);
  EXPECT_THROW(bspline_basis(0.0, std::vector<double>{0.0, 0.0, 1.0}, 3), DataError);
  EXPECT_THROW(bspline_basis(0.0, std::vector<double>{1.0, 0.0}, 3), DataError);
  EXPECT_THROW(bspline_basis(0.0, std::vector<double>{0.0, 1.0}, 0), DataError);
  EXPECT_THROW(bspline_basis(0.0, std::vector<double>{0.0, 1.0}, kMaxSplineDegree + 1), DataError);
  EXPECT_THROW(bspline_basis(std::nan(""), std::vector<double>{0.0, 1.0}, 1), DataError);
}

TEST(UniformGrid, EndpointsExact) {
  const auto g = uniform_grid(-0.3, 0.7, 7);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_EQ(g.front(), -0.3);
  EXPECT_EQ(g.back(), 0.7);
  EXPECT_EQ(basis_count(g.size(), 3), 10u);
}

}  // namespace
}  // namespace tskan
