#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "oracles.hpp"
#include "tskan/spectral_features.hpp"
#include "tskan/timeseries_data.hpp"

namespace tskan {
namespace {

SplitSpec random_split(Rng& rng) {
  const double a = rng.uniform(0.2, 0.8);
  const double b = rng.uniform(0.05, (1.0 - a) * 0.9);
  return {a, b, 1.0 - a - b, rng.next()};
}

TEST(DataProperty, SplitIsPartition) {
  Rng rng(401);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng.index(500);
    const SplitSpec spec = random_split(rng);
    const SplitIndices s = split_indices(n, spec);
    const auto sizes = split_sizes(n, spec);
    EXPECT_EQ(s.train.size(), sizes[0]);
    EXPECT_EQ(s.val.size(), sizes[1]);
    EXPECT_EQ(s.test.size(), sizes[2]);
    EXPECT_GE(s.val.size(), 1u);
    EXPECT_GE(s.test.size(), 1u);
    std::vector<std::size_t> all;
    for (const auto* part : {&s.train, &s.val, &s.test}) all.insert(all.end(), part->begin(), part->end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected) << "n=" << n;
    // Same seed, same split.
    EXPECT_EQ(split_indices(n, spec).val, s.val);
  }
}

TEST(DataProperty, ScalerRoundTrip) {
  Rng rng(402);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 2 + rng.index(60);
    const std::size_t cols = 1 + rng.index(6);
    const double mag = std::pow(10.0, rng.uniform(-3, 4));
    Matrix x = testing::random_matrix(rng, rows, cols, -mag, mag);
    if (trial % 5 == 0) {
      for (std::size_t r = 0; r < rows; ++r) x(r, 0) = 3.0;  // constant column
    }
    const ScalerParams p = fit_robust_scaler(x);
    const Matrix back = invert_scaler(p, apply_scaler(p, x));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) EXPECT_NEAR(back(r, c), x(r, c), 1e-12 * mag + 1e-15);
    for (std::size_t c = 0; c < cols; ++c) {
      EXPECT_NEAR(p.center[c], oracle::quantile(x.column(c), 0.5), 1e-12 * mag);
      const double iqr = oracle::quantile(x.column(c), 0.75) - oracle::quantile(x.column(c), 0.25);
      if (iqr > 1e-12) {
        EXPECT_NEAR(p.scale[c], iqr, 1e-12 * mag);
      } else {
        EXPECT_EQ(p.scale[c], 1.0);
      }
    }
  }
}

TEST(DataProperty, EnforceLengthIdempotent) {
  Rng rng(403);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset ds;
    ds.variable_names = {"a", "b"};
    const std::size_t max_len = 4 + rng.index(8);
    const std::size_t n = 1 + rng.index(30);
    std::size_t longer = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool too_long = rng.uniform() < 0.3;
      longer += too_long ? 1 : 0;
      const std::size_t len = too_long ? max_len + 1 + rng.index(5) : max_len;
      TimeSeriesSample s{"s" + std::to_string(i), testing::random_matrix(rng, 2, len), rng.uniform(-2, 2)};
      ds.samples.push_back(s);
    }
    const LengthReport once = enforce_length(ds, max_len, LengthPolicy::Drop);
    EXPECT_EQ(once.dropped, longer);
    EXPECT_EQ(once.dataset.size(), n - longer);
    const LengthReport twice = enforce_length(once.dataset, max_len, LengthPolicy::Drop);
    EXPECT_EQ(twice.dropped, 0u);
    ASSERT_EQ(twice.dataset.size(), once.dataset.size());
    for (std::size_t i = 0; i < once.dataset.size(); ++i) {
      EXPECT_EQ(twice.dataset.samples[i].sample_id, once.dataset.samples[i].sample_id);
      EXPECT_EQ(twice.dataset.samples[i].values, once.dataset.samples[i].values);
    }
  }
}

TEST(DataProperty, FeaturesIgnoreRowOrder) {
  Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset ds = testing::random_dataset(rng, 2 + rng.index(40), 1 + rng.index(4), 4 + rng.index(20));
    const int F = static_cast<int>(rng.index(ds.target_length / 2 + 1));
    std::vector<std::size_t> perm(ds.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    const FeatureTable a = build_feature_table(ds, F);
    const FeatureTable b = build_feature_table(select_samples(ds, perm), F);
    EXPECT_EQ(a.names, b.names);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      EXPECT_EQ(b.sample_ids[i], a.sample_ids[perm[i]]);
      EXPECT_EQ(b.targets[i], a.targets[perm[i]]);
      for (std::size_t c = 0; c < a.dims(); ++c) EXPECT_EQ(b.features(i, c), a.features(perm[i], c));
    }
  }
}

}  // namespace
}  // namespace tskan
