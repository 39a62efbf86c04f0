#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tskan/rng.hpp"
#include "tskan/synth.hpp"
#include "tskan/timeseries_data.hpp"

namespace tskan::testing {

/// N samples of V random-walk variables of length T with labels in [-2, 2].
Dataset random_dataset(Rng& rng, std::size_t n, std::size_t v, std::size_t t);

/// Matrix with entries uniform in [lo, hi].
Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0);

/// The four-effect synthetic setup used across tests: a negative linear DC
/// stalling effect, quadratic DC bitrate, sine on |X_qp(1)| and a linear
/// framerate phase effect.
SynthSpec four_effect_spec(std::uint64_t seed, std::size_t samples = 2000, double noise_std = 0.1);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);

}  // namespace tskan::testing
