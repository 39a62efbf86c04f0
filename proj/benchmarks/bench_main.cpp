#include <benchmark/benchmark.h>

#include "tskan/bspline.hpp"
#include "tskan/kan_model.hpp"
#include "tskan/rng.hpp"
#include "tskan/spectral_features.hpp"

namespace {

using namespace tskan;

void BM_Dft(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (auto& v : x) v = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dft(x));
}
BENCHMARK(BM_Dft)->Arg(16)->Arg(64)->Arg(256);

void BM_BsplineBasis(benchmark::State& state) {
  const auto grid = uniform_grid(-1.0, 1.0, 8);
  const int degree = static_cast<int>(state.range(0));
  Rng rng(2);
  std::vector<double> xs(1024);
  for (auto& v : xs) v = rng.uniform(-1.2, 1.2);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(bspline_basis(xs[i++ & 1023], grid, degree));
}
BENCHMARK(BM_BsplineBasis)->Arg(1)->Arg(3)->Arg(5);

Matrix random_features(Rng& rng, std::size_t n, std::size_t d) {
  Matrix m(n, d);
  for (double& v : m.data()) v = rng.uniform(-1, 1);
  return m;
}

std::vector<std::string> names(std::size_t d) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < d; ++j) out.push_back("x" + std::to_string(j));
  return out;
}

void BM_Forward(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const Matrix x = random_features(rng, 256, d);
  const std::vector<double> y(256, 0.0);
  const KanModel m = init_model(x, y, names(d), TrainConfig{});
  std::size_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(forward(m, x.row(r++ & 255)));
}
BENCHMARK(BM_Forward)->Arg(10)->Arg(18);

void BM_TrainEpoch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const Matrix x = random_features(rng, n, 18);
  std::vector<double> y(n);
  for (auto& v : y) v = rng.normal();
  TrainConfig cfg;
  cfg.epochs = 1;
  const KanModel m = init_model(x, y, names(18), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(train(m, x, y, x, y, cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_TrainEpoch)->Arg(1400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
