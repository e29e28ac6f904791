#include "cranopt/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cranopt/linalg.hpp"

namespace cranopt {

namespace {

constexpr double kPsdTolScale = 1e-9;
constexpr double kSlackTol = 1e-12;

void check_tx_power(const Vector& tx_power_w) {
  if (tx_power_w.size() == 0 || tx_power_w.minCoeff() <= 0.0) {
    throw std::invalid_argument("tx_power_w: entries must be > 0");
  }
}

Matrix gram_of(const Matrix& access, const Vector& tx_power_w) {
  return access * tx_power_w.asDiagonal() * access.adjoint();
}

// Accepts a block with Hermitian round-off, clipped to the PSD cone.
Matrix checked_psd(const Matrix& block, const char* what) {
  if (!is_psd(block, kPsdTolScale)) {
    throw std::domain_error(std::string(what) + ": block is not positive semidefinite");
  }
  return project_psd(hermitian_part(block));
}

Matrix inverse_hermitian_pd(const Matrix& x) {
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("inverse_hermitian_pd: matrix is not positive definite");
  }
  return hermitian_part(llt.solve(Matrix::Identity(x.rows(), x.cols())));
}

}  // namespace

double access_mi_from_gram(const Matrix& gram_full, const std::vector<Matrix>& distortion,
                           double noise_w) {
  const Eigen::Index mn = gram_full.rows();
  Matrix signal = gram_full + noise_w * Matrix::Identity(mn, mn);
  double noise_logdet = 0.0;
  Eigen::Index at = 0;
  for (const Matrix& d : distortion) {
    const Eigen::Index n = d.rows();
    signal.block(at, at, n, n) += d;
    noise_logdet += log_det2_hermitian_pd(d + noise_w * Matrix::Identity(n, n));
    at += n;
  }
  if (at != mn) throw std::invalid_argument("distortion blocks do not match the gram dimension");
  return log_det2_hermitian_pd(signal) - noise_logdet;
}

double access_mutual_information(const Matrix& stacked_access, const Vector& tx_power_w,
                                 const std::vector<Matrix>& distortion, double noise_w) {
  check_tx_power(tx_power_w);
  std::vector<Matrix> clipped;
  clipped.reserve(distortion.size());
  for (const Matrix& d : distortion) clipped.push_back(checked_psd(d, "access_mutual_information"));
  return access_mi_from_gram(gram_of(stacked_access, tx_power_w), clipped, noise_w);
}

double fronthaul_mi_from_gram(const Matrix& gram_m, const Matrix& distortion_m, double noise_w) {
  const Eigen::Index n = gram_m.rows();
  const double quantizer_logdet = log_det2_hermitian_pd(distortion_m);
  return log_det2_hermitian_pd(gram_m + distortion_m + noise_w * Matrix::Identity(n, n)) -
         quantizer_logdet;
}

double fronthaul_mutual_information(const Matrix& access_m, const Vector& tx_power_w,
                                    const Matrix& distortion_m, double noise_w) {
  check_tx_power(tx_power_w);
  if (min_eigenvalue(distortion_m) <= 0.0) {
    throw std::domain_error("fronthaul_mutual_information: singular distortion block");
  }
  return fronthaul_mi_from_gram(gram_of(access_m, tx_power_w), hermitian_part(distortion_m),
                                noise_w);
}

double rub_from_gram(const Matrix& gram_m, const Matrix& distortion_m, const Matrix& weight_m,
                     double noise_w) {
  const Eigen::Index n = gram_m.rows();
  const Matrix cov = gram_m + distortion_m + noise_w * Matrix::Identity(n, n);
  return -log_det2_hermitian_pd(weight_m) + std::real((weight_m * cov).trace()) / kLn2 -
         static_cast<double>(n) / kLn2 - log_det2_hermitian_pd(distortion_m);
}

double rub_upper_bound(const Matrix& access_m, const Vector& tx_power_w, const Matrix& distortion_m,
                       const Matrix& weight_m, double noise_w) {
  check_tx_power(tx_power_w);
  if (min_eigenvalue(distortion_m) <= 0.0 || min_eigenvalue(weight_m) <= 0.0) {
    throw std::domain_error("rub_upper_bound: singular distortion or weight block");
  }
  return rub_from_gram(gram_of(access_m, tx_power_w), hermitian_part(distortion_m),
                       hermitian_part(weight_m), noise_w);
}

Matrix optimal_weight_from_gram(const Matrix& gram_m, const Matrix& distortion_m, double noise_w) {
  const Eigen::Index n = gram_m.rows();
  return inverse_hermitian_pd(gram_m + distortion_m + noise_w * Matrix::Identity(n, n));
}

Matrix optimal_fronthaul_weight(const Matrix& access_m, const Vector& tx_power_w,
                                const Matrix& distortion_m, double noise_w) {
  check_tx_power(tx_power_w);
  return optimal_weight_from_gram(gram_of(access_m, tx_power_w),
                                  checked_psd(distortion_m, "optimal_fronthaul_weight"), noise_w);
}

Matrix optimal_access_weight(const std::vector<Matrix>& distortion, double noise_w) {
  std::vector<Matrix> blocks;
  blocks.reserve(distortion.size());
  for (const Matrix& d : distortion) {
    const Matrix clipped = checked_psd(d, "optimal_access_weight");
    blocks.push_back(
        inverse_hermitian_pd(clipped + noise_w * Matrix::Identity(d.rows(), d.rows())));
  }
  return block_diag(blocks);
}

double access_surrogate(const Matrix& gram_full, const std::vector<Matrix>& distortion,
                        const std::vector<Matrix>& access_weight_blocks, double noise_w) {
  const Eigen::Index mn = gram_full.rows();
  Matrix signal = gram_full + noise_w * Matrix::Identity(mn, mn);
  double weight_logdet = 0.0;
  double weighted_trace = 0.0;
  Eigen::Index at = 0;
  for (std::size_t m = 0; m < distortion.size(); ++m) {
    const Eigen::Index n = distortion[m].rows();
    signal.block(at, at, n, n) += distortion[m];
    weight_logdet += log_det2_hermitian_pd(access_weight_blocks[m]);
    weighted_trace += std::real(
        (access_weight_blocks[m] * (distortion[m] + noise_w * Matrix::Identity(n, n))).trace());
    at += n;
  }
  return log_det2_hermitian_pd(signal) + weight_logdet - weighted_trace / kLn2 +
         static_cast<double>(mn) / kLn2;
}

std::vector<Matrix> access_surrogate_gradient(const Matrix& gram_full,
                                              const std::vector<Matrix>& distortion,
                                              const std::vector<Matrix>& access_weight_blocks,
                                              double noise_w) {
  const Eigen::Index mn = gram_full.rows();
  Matrix signal = gram_full + noise_w * Matrix::Identity(mn, mn);
  Eigen::Index at = 0;
  for (const Matrix& d : distortion) {
    signal.block(at, at, d.rows(), d.rows()) += d;
    at += d.rows();
  }
  const Matrix inverse = inverse_hermitian_pd(signal);
  std::vector<Matrix> grad;
  grad.reserve(distortion.size());
  at = 0;
  for (std::size_t m = 0; m < distortion.size(); ++m) {
    const Eigen::Index n = distortion[m].rows();
    grad.push_back(hermitian_part(
        (inverse.block(at, at, n, n) - access_weight_blocks[m]) / kLn2));
    at += n;
  }
  return grad;
}

Matrix rub_gradient(const Matrix& distortion_m, const Matrix& weight_m) {
  return hermitian_part((weight_m - inverse_hermitian_pd(distortion_m)) / kLn2);
}

SurrogateIdentityCheck surrogate_identity_check(const Matrix& x, Rng& rng) {
  if (x.rows() != x.cols()) throw std::invalid_argument("surrogate_identity_check: square input");
  if (min_eigenvalue(x) <= 0.0) {
    throw std::domain_error("surrogate_identity_check: matrix is not positive definite");
  }
  const Eigen::Index j = x.rows();
  const Matrix optimal = inverse_hermitian_pd(x);
  const auto surrogate_at = [&](const Matrix& y) {
    return log_det2_hermitian_pd(y) - std::real((y * x).trace()) / kLn2 +
           static_cast<double>(j) / kLn2;
  };
  SurrogateIdentityCheck check;
  check.residual = std::abs(-log_det2_hermitian_pd(x) - surrogate_at(optimal));
  check.stationarity = 0.0;
  const double step = 1e-6;
  for (int probe = 0; probe < 5; ++probe) {
    Matrix raw(j, j);
    for (Eigen::Index c = 0; c < j; ++c) {
      for (Eigen::Index r = 0; r < j; ++r) raw(r, c) = rng.complex_normal();
    }
    Matrix direction = raw * raw.adjoint();
    direction /= direction.norm();
    const double forward = surrogate_at(optimal + step * direction);
    const double backward = surrogate_at(optimal - step * direction);
    check.stationarity = std::max(check.stationarity, std::abs(forward - backward) / (2.0 * step));
  }
  return check;
}

SubsetConstraintSet build_subset_constraints(const Vector& fso_bps, const Vector& rf_bps,
                                             double sample_rate_hz, double capacity_floor) {
  const int m = static_cast<int>(fso_bps.size());
  if (m < 1 || rf_bps.size() != m) {
    throw std::invalid_argument("build_subset_constraints: capacity vectors must match, M >= 1");
  }
  if (m > 12) {
    throw std::invalid_argument(
        "build_subset_constraints: M > 12 enumerates too many subsets; use "
        "minimal_time_feasible instead");
  }
  if (!fso_bps.allFinite() || !rf_bps.allFinite() || fso_bps.minCoeff() < 0.0 ||
      rf_bps.minCoeff() < 0.0) {
    throw std::invalid_argument("build_subset_constraints: capacities must be finite and >= 0");
  }
  if (capacity_floor <= 0.0 && rf_bps.minCoeff() <= 0.0) {
    throw std::invalid_argument(
        "build_subset_constraints: zero RF capacity requires a positive capacity_floor");
  }
  SubsetConstraintSet set;
  set.num_rus = m;
  set.sample_rate_hz = sample_rate_hz;
  set.capacity_floor = capacity_floor;
  set.rf_bps = rf_bps;
  set.fso_bps = fso_bps;
  Vector weight(m);
  for (int i = 0; i < m; ++i) weight(i) = 1.0 / std::max(rf_bps(i), capacity_floor);
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    SubsetConstraint c;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        c.members.push_back(i);
        c.weights.push_back(weight(i));
        c.rhs += fso_bps(i) * weight(i);
      }
    }
    // A sub-floor RF link gets its singleton constraint kept exact: the time
    // term carries the true (near-zero) capacity instead of the floor.
    if (c.members.size() == 1 && rf_bps(c.members[0]) < capacity_floor) {
      const int i = c.members[0];
      c.weights[0] = 1.0 / capacity_floor;
      c.time_coeff = rf_bps(i) / capacity_floor;
      c.rhs = fso_bps(i) / capacity_floor;
    }
    set.constraints.push_back(std::move(c));
  }
  return set;
}

SubsetConstraintSet build_fso_singleton_constraints(const Vector& fso_bps, double sample_rate_hz,
                                                    double capacity_floor) {
  const int m = static_cast<int>(fso_bps.size());
  if (m < 1) throw std::invalid_argument("build_fso_singleton_constraints: M >= 1 required");
  if (!fso_bps.allFinite() || fso_bps.minCoeff() < 0.0) {
    throw std::invalid_argument("build_fso_singleton_constraints: capacities must be >= 0");
  }
  if (!(capacity_floor > 0.0)) {
    throw std::invalid_argument("build_fso_singleton_constraints: capacity_floor must be > 0");
  }
  SubsetConstraintSet set;
  set.num_rus = m;
  set.sample_rate_hz = sample_rate_hz;
  set.capacity_floor = capacity_floor;
  set.rf_bps = Vector::Zero(m);
  set.fso_bps = fso_bps;
  for (int i = 0; i < m; ++i) {
    SubsetConstraint c;
    c.members.push_back(i);
    const double w = 1.0 / std::max(fso_bps(i), capacity_floor);
    c.weights.push_back(w);
    c.time_coeff = 0.0;
    c.rhs = fso_bps(i) * w;
    set.constraints.push_back(std::move(c));
  }
  return set;
}

FeasibilityCheck subset_feasible(double alpha0, const Vector& rate_bits,
                                 const SubsetConstraintSet& set) {
  if (alpha0 < 0.0 || alpha0 > 1.0) {
    throw std::invalid_argument("subset_feasible: alpha0 must lie in [0, 1]");
  }
  if (rate_bits.size() != set.num_rus) {
    throw std::invalid_argument("subset_feasible: rate vector length must equal M");
  }
  FeasibilityCheck check;
  check.worst_slack = std::numeric_limits<double>::infinity();
  for (const SubsetConstraint& c : set.constraints) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      lhs += c.weights[i] * rate_bits(c.members[i]);
    }
    lhs *= alpha0 * set.sample_rate_hz;
    const double slack = c.time_coeff * (1.0 - alpha0) + c.rhs - lhs;
    check.worst_slack = std::min(check.worst_slack, slack);
  }
  check.feasible = check.worst_slack >= -kSlackTol;
  return check;
}

MinimalTimeResult minimal_time_feasible(double alpha0, const Vector& rate_bits,
                                        const Vector& fso_bps, const Vector& rf_bps,
                                        double sample_rate_hz) {
  if (alpha0 < 0.0 || alpha0 > 1.0) {
    throw std::invalid_argument("minimal_time_feasible: alpha0 must lie in [0, 1]");
  }
  const int m = static_cast<int>(rate_bits.size());
  if (fso_bps.size() != m || rf_bps.size() != m) {
    throw std::invalid_argument("minimal_time_feasible: vector lengths must match");
  }
  MinimalTimeResult result;
  result.alpha.resize(m);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const double needed = alpha0 * sample_rate_hz * rate_bits(i) - fso_bps(i);
    if (needed <= 0.0) {
      result.alpha(i) = 0.0;
    } else if (rf_bps(i) > 0.0) {
      result.alpha(i) = needed / rf_bps(i);
    } else {
      result.alpha(i) = std::numeric_limits<double>::infinity();
    }
    total += result.alpha(i);
  }
  result.feasible = total <= 1.0 - alpha0 + kSlackTol;
  return result;
}

}  // namespace cranopt
