#include "cranopt/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cranopt {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw std::invalid_argument(field + ": " + what);
}

}  // namespace

void GeometryConfig::validate() const {
  require(d_ac > 0.0, "geometry.d_ac", "must be > 0");
  require(d_fr > 0.0, "geometry.d_fr", "must be > 0");
  require(d_ref > 0.0, "geometry.d_ref", "must be > 0");
  require(d_ac >= d_ref, "geometry.d_ac", "must be >= d_ref");
  require(d_fr >= d_ref, "geometry.d_fr", "must be >= d_ref");
  require(nu > 0.0, "geometry.nu", "must be > 0");
  require(lambda_rf > 0.0, "geometry.lambda_rf", "must be > 0");
  require(lambda_fso > 0.0, "geometry.lambda_fso", "must be > 0");
  require(omega >= 0.0, "geometry.omega", "must be >= 0");
  require(gg_shape_a > 0.0, "geometry.gg_shape_a", "must be > 0");
  require(gg_shape_b > 0.0, "geometry.gg_shape_b", "must be > 0");
  require(kappa_db_per_m >= 0.0, "geometry.kappa_db_per_m", "must be >= 0");
  require(aperture_radius > 0.0, "geometry.aperture_radius", "must be > 0");
  require(divergence_half_angle > 0.0, "geometry.divergence_half_angle", "must be > 0");
  require(responsivity > 0.0, "geometry.responsivity", "must be > 0");
}

void SystemConfig::validate() const {
  require(num_mus >= 1, "system.num_mus", "must be >= 1");
  require(num_rus >= 1, "system.num_rus", "must be >= 1");
  require(ru_antennas >= 1, "system.ru_antennas", "must be >= 1");
  require(cu_antennas >= 1, "system.cu_antennas", "must be >= 1");
  require(mu_power_w.size() == num_mus, "system.mu_power_w", "length must equal num_mus");
  require(ru_rf_power_w.size() == num_rus, "system.ru_rf_power_w", "length must equal num_rus");
  require(ru_fso_power_w.size() == num_rus, "system.ru_fso_power_w", "length must equal num_rus");
  require(mu_power_w.size() == 0 || mu_power_w.minCoeff() > 0.0, "system.mu_power_w",
          "entries must be > 0");
  require(ru_rf_power_w.size() == 0 || ru_rf_power_w.minCoeff() > 0.0, "system.ru_rf_power_w",
          "entries must be > 0");
  require(ru_fso_power_w.size() == 0 || ru_fso_power_w.minCoeff() > 0.0, "system.ru_fso_power_w",
          "entries must be > 0");
  require(rf_noise_w > 0.0, "system.rf_noise_w", "must be > 0");
  require(fso_noise_a2 > 0.0, "system.fso_noise_a2", "must be > 0");
  require(w_rf_hz > 0.0, "system.w_rf_hz", "must be > 0");
  require(w_fso_hz > 0.0, "system.w_fso_hz", "must be > 0");
  require(sample_rate_hz >= w_rf_hz, "system.sample_rate_hz", "must be >= w_rf_hz");
}

Matrix ChannelRealization::stacked_access() const {
  const int m = static_cast<int>(access.size());
  if (m == 0) return Matrix();
  const Eigen::Index n = access[0].rows();
  const Eigen::Index k = access[0].cols();
  Matrix h(m * n, k);
  for (int i = 0; i < m; ++i) h.block(i * n, 0, n, k) = access[i];
  return h;
}

Matrix sample_rayleigh(int rows, int cols, double path_loss_linear, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_rayleigh: dimensions must be >= 1");
  if (!(path_loss_linear > 0.0)) {
    throw std::invalid_argument("sample_rayleigh: path loss must be > 0");
  }
  const double amp = std::sqrt(path_loss_linear);
  Matrix out(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) out(r, c) = amp * rng.complex_normal();
  }
  return out;
}

Matrix sample_rician(int rows, int cols, double omega_linear, double path_loss_linear, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_rician: dimensions must be >= 1");
  if (!(path_loss_linear > 0.0)) throw std::invalid_argument("sample_rician: path loss must be > 0");
  if (omega_linear < 0.0) throw std::invalid_argument("sample_rician: omega must be >= 0");
  const double amp = std::sqrt(path_loss_linear);
  const double los = std::sqrt(omega_linear / (omega_linear + 1.0));
  const double nlos = std::sqrt(1.0 / (omega_linear + 1.0));
  Matrix out(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) out(r, c) = amp * (los + nlos * rng.complex_normal());
  }
  return out;
}

double sample_gamma_gamma(double shape_a, double shape_b, Rng& rng) {
  if (!(shape_a > 0.0) || !(shape_b > 0.0)) {
    throw std::invalid_argument("sample_gamma_gamma: shapes must be > 0");
  }
  return rng.gamma(shape_a, 1.0 / shape_a) * rng.gamma(shape_b, 1.0 / shape_b);
}

double rf_path_loss_linear(double d, double d_ref, double nu, double lambda, double g_tx_dbi,
                           double g_rx_dbi) {
  if (!(d_ref > 0.0) || d < d_ref) {
    throw std::invalid_argument("rf_path_loss_linear: requires d >= d_ref > 0");
  }
  const double free_space_db = 20.0 * std::log10(lambda / (4.0 * M_PI * d_ref));
  const double db = g_tx_dbi + g_rx_dbi + free_space_db - 10.0 * nu * std::log10(d / d_ref);
  return db_to_linear(db);
}

double fso_channel_gain(double d, double kappa_db_per_m, double aperture_radius,
                        double divergence_half_angle, double responsivity, double h_turb) {
  if (!(d > 0.0)) throw std::invalid_argument("fso_channel_gain: distance must be > 0");
  if (h_turb < 0.0) throw std::invalid_argument("fso_channel_gain: turbulence gain must be >= 0");
  const double collected =
      std::erf(std::sqrt(M_PI) * aperture_radius / (std::sqrt(2.0) * divergence_half_angle * d));
  const double attenuation = std::pow(10.0, -kappa_db_per_m * d / 10.0);
  return responsivity * collected * collected * attenuation * h_turb;
}

ChannelRealization generate_realization(const SystemConfig& system, const GeometryConfig& geometry,
                                        std::uint64_t seed) {
  system.validate();
  geometry.validate();
  Rng rng(seed);
  const double pl_access = rf_path_loss_linear(geometry.d_ac, geometry.d_ref, geometry.nu,
                                               geometry.lambda_rf, geometry.g_tx_mu_dbi,
                                               geometry.g_rx_ru_dbi);
  const double pl_fronthaul = rf_path_loss_linear(geometry.d_fr, geometry.d_ref, geometry.nu,
                                                  geometry.lambda_rf, geometry.g_tx_ru_dbi,
                                                  geometry.g_rx_cu_dbi);
  ChannelRealization out;
  out.seed = seed;
  out.access.reserve(system.num_rus);
  out.fronthaul_rf.reserve(system.num_rus);
  out.fso_gain.resize(system.num_rus);
  for (int m = 0; m < system.num_rus; ++m) {
    out.access.push_back(sample_rayleigh(system.ru_antennas, system.num_mus, pl_access, rng));
  }
  for (int m = 0; m < system.num_rus; ++m) {
    out.fronthaul_rf.push_back(
        sample_rician(system.cu_antennas, system.ru_antennas, geometry.omega, pl_fronthaul, rng));
  }
  for (int m = 0; m < system.num_rus; ++m) {
    const double h = sample_gamma_gamma(geometry.gg_shape_a, geometry.gg_shape_b, rng);
    out.fso_gain(m) =
        fso_channel_gain(geometry.d_fr, geometry.kappa_db_per_m, geometry.aperture_radius,
                         geometry.divergence_half_angle, geometry.responsivity, h);
  }
  return out;
}

SystemConfig desk_system_config() {
  SystemConfig cfg;
  cfg.num_mus = 4;
  cfg.num_rus = 2;
  cfg.ru_antennas = 2;
  cfg.cu_antennas = 8;
  cfg.mu_power_w = Vector::Constant(cfg.num_mus, dbm_to_watts(16.0));
  cfg.ru_rf_power_w = Vector::Constant(cfg.num_rus, dbm_to_watts(33.0));
  cfg.ru_fso_power_w = Vector::Constant(cfg.num_rus, dbm_to_watts(13.0));
  return cfg;
}

SystemConfig paper_system_config() {
  SystemConfig cfg = desk_system_config();
  cfg.num_mus = 8;
  cfg.ru_antennas = 8;
  cfg.cu_antennas = 64;
  cfg.mu_power_w = Vector::Constant(cfg.num_mus, dbm_to_watts(16.0));
  return cfg;
}

}  // namespace cranopt
