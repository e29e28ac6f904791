#pragma once

#include "cranopt/channel.hpp"
#include "cranopt/rng.hpp"
#include "cranopt/types.hpp"

namespace cranopt {

struct LinkCapacities {
  Vector fso_bps;  // per RU, in [0, w_fso_hz]
  Vector rf_bps;   // per RU, >= 0
};

struct GaussHermiteRule {
  Vector nodes;
  Vector weights;  // for the weight function exp(-x^2)
};

// Golub-Welsch nodes/weights for the exp(-x^2) weight.
GaussHermiteRule gauss_hermite_rule(int n);

// Capacity of the equiprobable binary-input (on-off) real AWGN channel in
// bits per channel use. snr is on-level amplitude over noise standard
// deviation. Gauss-Hermite evaluation with 64 nodes; saturating inputs are
// short-circuited.
double ook_capacity_bits(double snr);

// Same value through the symmetric two-sided integrand (both conditional
// divergences summed and halved). Kept as an alternate evaluation path.
double ook_capacity_bits_symmetric(double snr);

struct OokOracleEstimate {
  double bits_per_use;
  double std_error;
};

// Monte-Carlo estimate of the same capacity from the mutual-information
// identity 1 - E{log2(1 + exp(snr*n - snr^2/2))}, n ~ N(0,1). Independent of
// the quadrature path; n_samples must be >= 1000.
OokOracleEstimate ook_capacity_oracle(double snr, long n_samples, Rng& rng);

// FSO link capacity (bits/s) for on-off signaling with peak power
// peak_power_w, channel gain `gain`, shot-noise variance noise_a2 and
// bandwidth w_fso_hz. Clamped to [0, w_fso_hz].
double fso_capacity(double gain, double peak_power_w, double noise_a2, double w_fso_hz);

struct WaterfillResult {
  double capacity_bps;
  double water_level;
};

// Water-filling capacity of a MIMO link with per-link power budget power_w
// and per-antenna noise noise_w. The water level satisfies the power budget
// to 1e-9 relative; singular values below 1e-12 of the largest are treated
// as zero. A zero channel yields (0, 0).
WaterfillResult waterfill_rf_capacity(const Matrix& channel, double power_w, double noise_w,
                                      double w_rf_hz);

LinkCapacities compute_link_capacities(const ChannelRealization& realization,
                                       const SystemConfig& system);

}  // namespace cranopt
