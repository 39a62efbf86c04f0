#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tskan/bspline.hpp"
#include "tskan/kan_model.hpp"

namespace tskan {
namespace {

TEST(BsplineProperty, PartitionOfUnity) {
  Rng rng(201);
  for (std::size_t g = 4; g <= 16; ++g) {
    for (int degree = 1; degree <= 3; ++degree) {
      const double lo = rng.uniform(-5, 0);
      const double hi = lo + rng.uniform(0.5, 10);
      const auto grid = uniform_grid(lo, hi, g);
      for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(lo, hi);
        const BasisWeights b = bspline_basis(x, grid, degree);
        EXPECT_NEAR(b.sum(), 1.0, 1e-12) << "G=" << g << " p=" << degree << " x=" << x;
        for (int r = 0; r < b.count; ++r) EXPECT_GE(b.weights[static_cast<std::size_t>(r)], -1e-15);
        EXPECT_LE(b.first + static_cast<std::size_t>(b.count), basis_count(grid.size(), degree));
      }
      EXPECT_NEAR(bspline_basis(lo, grid, degree).sum(), 1.0, 1e-12);
      EXPECT_NEAR(bspline_basis(hi, grid, degree).sum(), 1.0, 1e-12);
    }
  }
}

TEST(BsplineProperty, NonUniformGridMatchesOracle) {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t g = 2 + rng.index(12);
    const int degree = 1 + static_cast<int>(rng.index(3));
    std::vector<double> grid{rng.uniform(-3, 0)};
    for (std::size_t i = 0; i < g; ++i) grid.push_back(grid.back() + rng.uniform(0.05, 1.0));
    for (int i = 0; i < 20; ++i) {
      const double x = rng.uniform(grid.front(), grid.back());
      const auto ref = oracle::basis_values(grid, degree, x);
      const BasisWeights b = bspline_basis(x, grid, degree);
      double total = 0.0;
      for (int r = 0; r < b.count; ++r) {
        const auto idx = b.first + static_cast<std::size_t>(r);
        EXPECT_NEAR(b.weights[static_cast<std::size_t>(r)], ref[idx], 1e-12);
        total += ref[idx];
      }
      double ref_total = 0.0;
      for (double v : ref) ref_total += v;
      EXPECT_NEAR(total, ref_total, 1e-12);
    }
  }
}

TEST(BsplineProperty, SplineExtrapolatesLinearly) {
  Rng rng(203);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t g = 4 + rng.index(13);
    const int degree = 1 + static_cast<int>(rng.index(3));
    SplineActivation a = oracle::random_activation(rng, g, degree, -1.0, 1.0);
    a.base_weight = 0.0;
    for (const double sign : {-1.0, 1.0}) {
      const double start = sign * rng.uniform(1.5, 20.0);
      const double h = rng.uniform(0.1, 5.0);
      const double y0 = eval_activation(a, start);
      const double y1 = eval_activation(a, start + sign * h);
      const double y2 = eval_activation(a, start + 2 * sign * h);
      EXPECT_NEAR(y2 - 2 * y1 + y0, 0.0, 1e-9 * std::max(1.0, std::abs(y2)));
    }
    // Continuous at the boundary.
    const double eps = 1e-9;
    EXPECT_NEAR(eval_activation(a, 1.0 + eps), eval_activation(a, 1.0), 1e-6);
    EXPECT_NEAR(eval_activation(a, -1.0 - eps), eval_activation(a, -1.0), 1e-6);
  }
}

}  // namespace
}  // namespace tskan
