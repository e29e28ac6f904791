#pragma once

#include <vector>

#include "cranopt/optimizer.hpp"

namespace cranopt {

enum class BaselineScheme { fso_sq, fso_vq };

struct BaselineResult {
  BaselineScheme scheme;
  double c_sum_bps = 0.0;
  std::vector<Matrix> distortion;
  Vector per_antenna_rate_bits;  // scalar quantization only
  int aco_iterations = 0;        // vector quantization only
};

struct ScalarQuantization {
  std::vector<Matrix> distortion;  // diagonal blocks
  Vector per_antenna_rate_bits;    // r_m per RU
};

// Per-antenna scalar rate-distortion test channel: each RU splits its FSO
// capacity evenly across antennas and quantizes each antenna independently at
// that rate; an RU with no rate is excluded through a huge distortion.
ScalarQuantization scalar_quantization_distortion(const ChannelRealization& realization,
                                                  const LinkCapacities& capacities,
                                                  const SystemConfig& system);

// FSO-only fronthaul, scalar quantization, alpha0 = 1.
BaselineResult fso_sq(const ChannelRealization& realization, const LinkCapacities& capacities,
                      const SystemConfig& system);

// FSO-only fronthaul, vector quantization, alpha0 = 1: the alternating inner
// loop under per-RU FSO singleton constraints, with the scalar-quantization
// solution as a fallback candidate (whichever is better is returned).
BaselineResult fso_vq(const ChannelRealization& realization, const LinkCapacities& capacities,
                      const SystemConfig& system, const SolverSettings& settings);

// The alpha0 = 1 evaluation shared by fso_vq and the optimizer's endpoint
// probe, so the hybrid scheme can never fall below the FSO-only benchmarks.
AcoResult fso_only_inner(const ChannelRealization& realization, const LinkCapacities& capacities,
                         const SystemConfig& system, const SolverSettings& settings);

}  // namespace cranopt
