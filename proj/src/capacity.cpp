#include "cranopt/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

namespace cranopt {

namespace {

constexpr int kQuadratureNodes = 64;
const double kSqrtPi = std::sqrt(M_PI);

// log2(1 + exp(z)) without overflow.
double softplus2(double z) {
  if (z > 36.0) return z / kLn2;
  if (z < -36.0) return std::exp(z) / kLn2;
  return std::log1p(std::exp(z)) / kLn2;
}

const GaussHermiteRule& cached_rule() {
  static const GaussHermiteRule rule = gauss_hermite_rule(kQuadratureNodes);
  return rule;
}

}  // namespace

GaussHermiteRule gauss_hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: n must be >= 1");
  // Jacobi matrix of the Hermite recurrence; eigenvalues are the nodes and
  // the squared first eigenvector components give the weights.
  RealMatrix jacobi = RealMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    const double b = std::sqrt((k + 1) / 2.0);
    jacobi(k, k + 1) = b;
    jacobi(k + 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(jacobi);
  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights(i) = kSqrtPi * v0 * v0;
  }
  return rule;
}

double ook_capacity_bits(double snr) {
  if (snr < 0.0) throw std::invalid_argument("ook_capacity_bits: snr must be >= 0");
  const double u = snr / std::sqrt(2.0);
  if (u < 1e-6) return 0.0;
  if (u > 30.0) return 1.0;
  const GaussHermiteRule& rule = cached_rule();
  // E{log2(1 + exp(snr*n - snr^2/2))} with n = sqrt(2)*t against exp(-t^2).
  double acc = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights(i) * softplus2(snr * std::sqrt(2.0) * rule.nodes(i) - 0.5 * snr * snr);
  }
  return std::clamp(1.0 - acc / kSqrtPi, 0.0, 1.0);
}

double ook_capacity_bits_symmetric(double snr) {
  if (snr < 0.0) throw std::invalid_argument("ook_capacity_bits_symmetric: snr must be >= 0");
  const double u = snr / std::sqrt(2.0);
  if (u < 1e-6) return 0.0;
  if (u > 30.0) return 1.0;
  const GaussHermiteRule& rule = cached_rule();
  // The three-exponential integrand factors as (1+e^a)(1+e^b) with
  // a = 2*t*u - u^2 and b = -2*t*u - u^2, which keeps it finite at high snr.
  double acc = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double a = 2.0 * rule.nodes(i) * u - u * u;
    const double b = -2.0 * rule.nodes(i) * u - u * u;
    acc += rule.weights(i) * (softplus2(a) + softplus2(b));
  }
  return std::clamp(1.0 - acc / (2.0 * kSqrtPi), 0.0, 1.0);
}

OokOracleEstimate ook_capacity_oracle(double snr, long n_samples, Rng& rng) {
  if (snr < 0.0) throw std::invalid_argument("ook_capacity_oracle: snr must be >= 0");
  if (n_samples < 1000) throw std::invalid_argument("ook_capacity_oracle: need >= 1000 samples");
  double mean = 0.0;
  double m2 = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    const double y = softplus2(snr * rng.normal() - 0.5 * snr * snr);
    const double delta = y - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (y - mean);
  }
  const double var = m2 / static_cast<double>(n_samples - 1);
  OokOracleEstimate est;
  est.bits_per_use = 1.0 - mean;
  est.std_error = std::sqrt(var / static_cast<double>(n_samples));
  return est;
}

double fso_capacity(double gain, double peak_power_w, double noise_a2, double w_fso_hz) {
  if (gain < 0.0) throw std::invalid_argument("fso_capacity: gain must be >= 0");
  if (!(peak_power_w > 0.0) || !(noise_a2 > 0.0) || !(w_fso_hz > 0.0)) {
    throw std::invalid_argument("fso_capacity: power, noise and bandwidth must be > 0");
  }
  const double snr = peak_power_w * gain / std::sqrt(noise_a2);
  return std::clamp(w_fso_hz * ook_capacity_bits(snr), 0.0, w_fso_hz);
}

WaterfillResult waterfill_rf_capacity(const Matrix& channel, double power_w, double noise_w,
                                      double w_rf_hz) {
  if (!channel.allFinite()) {
    throw std::invalid_argument("waterfill_rf_capacity: channel has non-finite entries");
  }
  if (!(power_w > 0.0) || !(noise_w > 0.0) || !(w_rf_hz > 0.0)) {
    throw std::invalid_argument("waterfill_rf_capacity: power, noise and bandwidth must be > 0");
  }
  Eigen::JacobiSVD<Matrix> svd(channel);
  const Vector sv = svd.singularValues();
  std::vector<double> thresholds;  // noise_w / chi^2 for retained modes
  const double chi_max = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  for (int j = 0; j < sv.size(); ++j) {
    if (sv(j) > 1e-12 * chi_max && sv(j) > 0.0) {
      thresholds.push_back(noise_w / (sv(j) * sv(j)));
    }
  }
  if (thresholds.empty()) return {0.0, 0.0};

  const auto filled = [&](double mu) {
    double total = 0.0;
    for (double t : thresholds) total += std::max(0.0, mu - t);
    return total;
  };
  double lo = *std::min_element(thresholds.begin(), thresholds.end());
  double hi = lo + power_w;  // over-fills: the strongest mode alone absorbs the budget
  double mu = hi;
  for (int it = 0; it < 200; ++it) {
    mu = 0.5 * (lo + hi);
    const double excess = filled(mu) - power_w;
    if (std::abs(excess) <= 1e-12 * power_w) break;
    if (excess > 0.0) {
      hi = mu;
    } else {
      lo = mu;
    }
  }
  double bits = 0.0;
  for (double t : thresholds) bits += std::max(0.0, std::log2(mu / t));
  return {w_rf_hz * bits, mu};
}

LinkCapacities compute_link_capacities(const ChannelRealization& realization,
                                       const SystemConfig& system) {
  const int m = system.num_rus;
  LinkCapacities caps;
  caps.fso_bps.resize(m);
  caps.rf_bps.resize(m);
  for (int i = 0; i < m; ++i) {
    caps.fso_bps(i) = fso_capacity(realization.fso_gain(i), system.ru_fso_power_w(i),
                                   system.fso_noise_a2, system.w_fso_hz);
    caps.rf_bps(i) = waterfill_rf_capacity(realization.fronthaul_rf[i], system.ru_rf_power_w(i),
                                           system.rf_noise_w, system.w_rf_hz)
                         .capacity_bps;
  }
  return caps;
}

}  // namespace cranopt
