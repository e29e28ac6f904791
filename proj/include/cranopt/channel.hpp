#pragma once

#include <cstdint>
#include <vector>

#include "cranopt/rng.hpp"
#include "cranopt/types.hpp"

namespace cranopt {

// Geometry and propagation parameters. Distances in m, gains in dBi, angles
// in rad, attenuation in dB/m; the Rician factor and Gamma-Gamma shapes are
// linear.
struct GeometryConfig {
  double d_ac = 100.0;    // MU-RU distance
  double d_fr = 500.0;    // RU-CU distance
  double d_ref = 5.0;     // RF reference distance
  double g_tx_mu_dbi = 0.0;
  double g_rx_ru_dbi = 10.0;
  double g_tx_ru_dbi = 10.0;
  double g_rx_cu_dbi = 10.0;
  double nu = 3.5;  // RF path-loss exponent
  double lambda_rf = 0.0857;
  double lambda_fso = 1550e-9;
  double omega = 3.9810717055349722;  // Rician factor, linear (6 dB)
  double gg_shape_a = 2.23;           // Gamma-Gamma turbulence shapes
  double gg_shape_b = 1.54;
  double kappa_db_per_m = 4.2e-3;     // weather attenuation
  double aperture_radius = 0.10;
  double divergence_half_angle = 2e-3;
  double responsivity = 0.5;

  void validate() const;  // throws std::invalid_argument with the field path
};

struct SystemConfig {
  int num_mus = 4;      // K
  int num_rus = 2;      // M
  int ru_antennas = 2;  // N
  int cu_antennas = 8;  // L
  Vector mu_power_w;      // per-MU transmit power, length K
  Vector ru_rf_power_w;   // per-RU RF fronthaul power, length M
  Vector ru_fso_power_w;  // per-RU FSO peak power, length M
  double rf_noise_w = 5.0357016471766693e-13;  // -114 dBm/MHz over 40 MHz + 5 dB NF
  double fso_noise_a2 = 1e-14;
  double w_rf_hz = 40e6;
  double w_fso_hz = 1e9;
  double sample_rate_hz = 40e6;  // I/Q sampling rate, >= w_rf_hz

  void validate() const;
};

// One fading block. access[m] is N x K, fronthaul_rf[m] is L x N, fso_gain[m]
// is the nonnegative optical channel gain. Immutable once generated.
struct ChannelRealization {
  std::vector<Matrix> access;
  std::vector<Matrix> fronthaul_rf;
  Vector fso_gain;
  std::uint64_t seed = 0;

  Matrix stacked_access() const;  // MN x K
};

// i.i.d. circularly-symmetric complex Gaussian entries with per-entry
// variance path_loss_linear.
Matrix sample_rayleigh(int rows, int cols, double path_loss_linear, Rng& rng);

// sqrt(pl) * [sqrt(w/(w+1)) * ones + sqrt(1/(w+1)) * CN(0,1)]; the LOS
// component is the deterministic all-ones matrix.
Matrix sample_rician(int rows, int cols, double omega_linear, double path_loss_linear, Rng& rng);

// Product of two independent unit-mean Gamma variates with the given shapes.
double sample_gamma_gamma(double shape_a, double shape_b, Rng& rng);

// Log-distance path loss anchored at the free-space gain of d_ref.
double rf_path_loss_linear(double d, double d_ref, double nu, double lambda, double g_tx_dbi,
                           double g_rx_dbi);

// Geometric collection of a Gaussian beam through Beer-Lambert attenuation,
// scaled by the photodetector responsivity and the turbulence gain.
double fso_channel_gain(double d, double kappa_db_per_m, double aperture_radius,
                        double divergence_half_angle, double responsivity, double h_turb);

ChannelRealization generate_realization(const SystemConfig& system, const GeometryConfig& geometry,
                                        std::uint64_t seed);

// Table-parameter profiles. Desk scale keeps runs CI-friendly; paper scale is
// K=8, N=8, L=64.
SystemConfig desk_system_config();
SystemConfig paper_system_config();

}  // namespace cranopt
