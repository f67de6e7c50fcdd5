#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace triq {

struct RngSeed {
  std::uint64_t value = 0;
};

/// Seeded random stream. Streams derived from the same (seed, stream) pair
/// produce bit-identical sequences, which is what makes sharded ensembles
/// reproducible regardless of how many workers consume them.
class Rng {
 public:
  explicit Rng(RngSeed seed, std::uint64_t stream = 0);

  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return normal_(engine_); }
  std::complex<double> complex_normal() { return {normal(), normal()}; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace triq
