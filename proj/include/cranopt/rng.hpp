#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cranopt {

// Derives an independent sub-stream seed from a master seed (SplitMix64 mix
// of master + stream). Trials seeded this way are reproducible individually
// and in any parallel schedule.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Deterministic sampler on top of std::mt19937_64. Distributions are built
// from raw engine words here instead of std::*_distribution, so a given seed
// yields the same stream on every standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                       // (0, 1]
  double normal();                        // N(0, 1), Box-Muller
  std::complex<double> complex_normal();  // CN(0, 1)
  double gamma(double shape, double scale);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cranopt
