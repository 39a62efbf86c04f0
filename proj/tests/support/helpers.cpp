#include "helpers.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace tskan::testing {

Dataset random_dataset(Rng& rng, std::size_t n, std::size_t v, std::size_t t) {
  Dataset ds;
  for (std::size_t j = 0; j < v; ++j) ds.variable_names.push_back("v" + std::to_string(j));
  ds.target_length = t;
  for (std::size_t i = 0; i < n; ++i) {
    TimeSeriesSample s{"id" + std::to_string(i), Matrix(v, t), rng.uniform(-2.0, 2.0)};
    for (std::size_t j = 0; j < v; ++j) {
      double x = rng.uniform(-1.0, 1.0);
      for (std::size_t k = 0; k < t; ++k) {
        x += 0.3 * rng.normal();
        s.values(j, k) = x;
      }
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (double& x : m.data()) x = rng.uniform(lo, hi);
  return m;
}

SynthSpec four_effect_spec(std::uint64_t seed, std::size_t samples, double noise_std) {
  SynthSpec s;
  s.samples = samples;
  s.length = 16;
  s.noise_std = noise_std;
  s.seed = seed;
  s.effects = {{"M_stalling(0)", EffectShape::Linear, -1.0},
               {"M_bitrate(0)", EffectShape::Quadratic, 0.8},
               {"M_qp(1)", EffectShape::Sine, 0.7},
               {"phi_framerate(1)", EffectShape::Linear, 0.6}};
  return s;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("tskan_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace tskan::testing
