#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tskan/rng.hpp"
#include "tskan/spectral_features.hpp"

namespace tskan {
namespace {

std::vector<double> random_series(Rng& rng, std::size_t n, double amp = 10.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-amp, amp);
  return x;
}

TEST(SpectralProperty, MatchesDirectSummation) {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t T = 1 + rng.index(128);
    const auto x = random_series(rng, T);
    const Spectrum X = dft(x);
    const auto ref = oracle::direct_dft(x);
    ASSERT_EQ(X.size(), T);
    for (std::size_t f = 0; f < T; ++f) {
      EXPECT_NEAR(X[f].real(), static_cast<double>(ref[f].real()), 1e-9) << "T=" << T << " f=" << f;
      EXPECT_NEAR(X[f].imag(), static_cast<double>(ref[f].imag()), 1e-9) << "T=" << T << " f=" << f;
    }
  }
}

TEST(SpectralProperty, Parseval) {
  Rng rng(102);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t T = 1 + rng.index(96);
    const auto x = random_series(rng, T);
    double energy = 0.0;
    for (double v : x) energy += v * v;
    double spec = 0.0;
    for (const auto& c : dft(x)) spec += std::norm(c);
    EXPECT_NEAR(spec / static_cast<double>(T), energy, 1e-10 * std::max(1.0, energy));
  }
}

TEST(SpectralProperty, Linearity) {
  Rng rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t T = 1 + rng.index(64);
    const auto x = random_series(rng, T);
    const auto y = random_series(rng, T);
    const double a = rng.uniform(-3, 3);
    const double b = rng.uniform(-3, 3);
    std::vector<double> z(T);
    for (std::size_t t = 0; t < T; ++t) z[t] = a * x[t] + b * y[t];
    const Spectrum X = dft(x), Y = dft(y), Z = dft(z);
    for (std::size_t f = 0; f < T; ++f) EXPECT_LT(std::abs(Z[f] - (a * X[f] + b * Y[f])), 1e-9);
  }
}

TEST(SpectralProperty, ConjugateSymmetry) {
  Rng rng(104);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t T = 2 + rng.index(64);
    const Spectrum X = dft(random_series(rng, T));
    EXPECT_NEAR(X[0].imag(), 0.0, 1e-12);
    for (std::size_t f = 1; f < T; ++f) EXPECT_LT(std::abs(X[T - f] - std::conj(X[f])), 1e-9);
  }
}

TEST(SpectralProperty, DcIsSignedSum) {
  Rng rng(105);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t T = 2 + rng.index(64);
    const auto x = random_series(rng, T);
    long double sum = 0.0L;
    for (double v : x) sum += v;
    const auto c = extract_components(dft(x), static_cast<int>(T / 2));
    EXPECT_NEAR(c.dc, static_cast<double>(sum), 1e-10);
    ASSERT_EQ(c.magnitudes.size(), T / 2);
    for (double p : c.phases) {
      EXPECT_GT(p, -std::numbers::pi);
      EXPECT_LE(p, std::numbers::pi);
    }
  }
}

TEST(SpectralProperty, CircularShiftRotatesPhase) {
  Rng rng(106);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t T = 4 + rng.index(60);
    const std::size_t s = rng.index(T);
    const auto x = random_series(rng, T);
    std::vector<double> shifted(T);
    for (std::size_t t = 0; t < T; ++t) shifted[(t + s) % T] = x[t];
    const auto F = static_cast<int>(T / 2);
    const auto a = extract_components(dft(x), F);
    const auto b = extract_components(dft(shifted), F);
    EXPECT_NEAR(a.dc, b.dc, 1e-9);
    for (int f = 1; f <= F; ++f) {
      const auto i = static_cast<std::size_t>(f - 1);
      EXPECT_NEAR(a.magnitudes[i], b.magnitudes[i], 1e-9);
      if (a.magnitudes[i] < 1e-6) continue;
      const double expected = a.phases[i] - 2.0 * std::numbers::pi * f * static_cast<double>(s) / static_cast<double>(T);
      const double diff = std::remainder(b.phases[i] - expected, 2.0 * std::numbers::pi);
      EXPECT_NEAR(diff, 0.0, 1e-8) << "T=" << T << " s=" << s << " f=" << f;
    }
  }
}

TEST(SpectralProperty, ConstantSeriesHasNoHarmonics) {
  Rng rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t T = 2 + rng.index(40);
    const double c = rng.uniform(-5, 5);
    const auto comp = extract_components(dft(std::vector<double>(T, c)), static_cast<int>(T / 2));
    EXPECT_NEAR(comp.dc, c * static_cast<double>(T), 1e-10);
    for (std::size_t i = 0; i < comp.magnitudes.size(); ++i) {
      EXPECT_LT(comp.magnitudes[i], 1e-9);
      if (comp.magnitudes[i] < kPhaseMagnitudeFloor) EXPECT_EQ(comp.phases[i], 0.0);
    }
  }
}

}  // namespace
}  // namespace tskan
