#pragma once

#include <vector>

#include "cranopt/rng.hpp"
#include "cranopt/types.hpp"

namespace cranopt {

// Distortion covariances plus the auxiliary weight matrices of the concave
// surrogate machinery: access_weight enters the sum-rate surrogate,
// fronthaul_weight[m] the per-RU rate upper bound.
struct QuantizationSolution {
  std::vector<Matrix> distortion;        // per-RU, N x N Hermitian PSD
  Matrix access_weight;                  // MN x MN Hermitian PSD
  std::vector<Matrix> fronthaul_weight;  // per-RU, N x N Hermitian PSD
};

// One normalized time-sharing constraint:
//   alpha0 * f_s * sum_i weights[i] * rate[members[i]]
//     <= time_coeff * (1 - alpha0) + rhs
struct SubsetConstraint {
  std::vector<int> members;
  std::vector<double> weights;
  double time_coeff = 1.0;
  double rhs = 0.0;
};

struct SubsetConstraintSet {
  int num_rus = 0;
  double sample_rate_hz = 0.0;
  double capacity_floor = 0.0;
  Vector rf_bps;   // raw capacities as given
  Vector fso_bps;
  std::vector<SubsetConstraint> constraints;
};

struct FeasibilityCheck {
  bool feasible = false;
  double worst_slack = 0.0;  // min over constraints of (rhs - lhs), normalized
};

struct MinimalTimeResult {
  bool feasible = false;
  Vector alpha;  // witness fronthaul time shares; +inf marks a dead RF link
};

// I(x, y_hat) in bits per complex sample: log-det ratio of the received
// covariance with and without the transmitted signal. distortion holds the
// per-RU diagonal blocks.
double access_mutual_information(const Matrix& stacked_access, const Vector& tx_power_w,
                                 const std::vector<Matrix>& distortion, double noise_w);

// I(y_m, y_hat_m) in bits per complex sample; requires a nonsingular
// distortion block (a singular quantizer has infinite rate).
double fronthaul_mutual_information(const Matrix& access_m, const Vector& tx_power_w,
                                    const Matrix& distortion_m, double noise_w);

// Concave-in-distortion upper bound on the fronthaul rate, parameterized by
// the weight matrix; tight when the weight equals optimal_fronthaul_weight.
double rub_upper_bound(const Matrix& access_m, const Vector& tx_power_w, const Matrix& distortion_m,
                       const Matrix& weight_m, double noise_w);

// (H_m S H_m^H + D_m + noise I)^{-1}
Matrix optimal_fronthaul_weight(const Matrix& access_m, const Vector& tx_power_w,
                                const Matrix& distortion_m, double noise_w);

// (D + noise I)^{-1}, block diagonal like D.
Matrix optimal_access_weight(const std::vector<Matrix>& distortion, double noise_w);

// Gram-matrix forms used on hot paths; gram = H * diag(P) * H^H.
double access_mi_from_gram(const Matrix& gram_full, const std::vector<Matrix>& distortion,
                           double noise_w);
double fronthaul_mi_from_gram(const Matrix& gram_m, const Matrix& distortion_m, double noise_w);
double rub_from_gram(const Matrix& gram_m, const Matrix& distortion_m, const Matrix& weight_m,
                     double noise_w);
Matrix optimal_weight_from_gram(const Matrix& gram_m, const Matrix& distortion_m, double noise_w);

// The concave surrogate of the access mutual information at a fixed weight
// matrix (bits per sample). Includes the variational-identity constant, so
// evaluating at optimal_access_weight reproduces access_mutual_information.
double access_surrogate(const Matrix& gram_full, const std::vector<Matrix>& distortion,
                        const std::vector<Matrix>& access_weight_blocks, double noise_w);

// d(surrogate)/dD_m = (block_m((G + D + noise I)^{-1}) - B_m) / ln 2.
std::vector<Matrix> access_surrogate_gradient(const Matrix& gram_full,
                                              const std::vector<Matrix>& distortion,
                                              const std::vector<Matrix>& access_weight_blocks,
                                              double noise_w);

// d(rub)/dD_m = (A_m - D_m^{-1}) / ln 2.
Matrix rub_gradient(const Matrix& distortion_m, const Matrix& weight_m);

struct SurrogateIdentityCheck {
  double residual;      // |log2 det X^{-1} - surrogate at the optimal weight|
  double stationarity;  // max |finite-difference directional derivative|
};

// Verifies the variational log-det identity
//   log2|X^{-1}| = max_{Y >= 0} log2|Y| - Tr(YX)/ln2 + J/ln2
// at Y* = X^{-1}, probing stationarity in 5 random Hermitian PSD directions.
SurrogateIdentityCheck surrogate_identity_check(const Matrix& x, Rng& rng);

// Enumerates the 2^M - 1 subset constraints equivalent to the per-RU
// time-sharing constraints, normalized by the product of RF capacities so
// each weight is 1/C_rf. RF capacities below capacity_floor are floored in
// the weights, and the corresponding singleton constraint is kept exact.
// Requires M <= 12; if capacity_floor <= 0 all RF capacities must be > 0.
SubsetConstraintSet build_subset_constraints(const Vector& fso_bps, const Vector& rf_bps,
                                             double sample_rate_hz, double capacity_floor);

// The M singleton constraints alpha0 * f_s * rate_m <= fso_bps[m], used when
// no RF fronthaul time exists (alpha0 = 1 / FSO-only operation).
SubsetConstraintSet build_fso_singleton_constraints(const Vector& fso_bps, double sample_rate_hz,
                                                    double capacity_floor);

FeasibilityCheck subset_feasible(double alpha0, const Vector& rate_bits,
                                 const SubsetConstraintSet& set);

// Independent feasibility oracle from the original per-RU constraints: the
// minimal fronthaul shares are alpha_m = [alpha0 f_s I_m - C_fso]+ / C_rf and
// feasibility is sum alpha_m <= 1 - alpha0.
MinimalTimeResult minimal_time_feasible(double alpha0, const Vector& rate_bits,
                                        const Vector& fso_bps, const Vector& rf_bps,
                                        double sample_rate_hz);

}  // namespace cranopt
