#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cranopt/capacity.hpp"
#include "cranopt/channel.hpp"
#include "cranopt/rates.hpp"

namespace cranopt {

struct SolverSettings {
  double gss_epsilon = 0.02;      // outer search interval tolerance
  double aco_epsilon_bps = 1e4;   // inner-loop termination, 0.01 Mbps
  double barrier_tau_start = 1.0;
  double barrier_tau_factor = 0.2;
  double barrier_tau_floor = 1e-6;
  double inner_rel_tol = 1e-8;    // per-stage relative objective tolerance
  int max_stage_iterations = 500;
  int max_aco_iterations = 500;
  double initial_distortion_scale = 0.0;  // <= 0: start at the RF noise power
  bool plain_constraints = false;  // exact-rate constraint slacks instead of the upper bound

  void validate() const;
};

struct TimeAllocation {
  double alpha0 = 0.0;
  Vector alpha_m;  // fronthaul shares; alpha0 + sum <= 1, leftover RF time is idle
};

// Inner-loop outcome for one fixed alpha0. An infeasible alpha0 is flagged
// with c_sum 0 so the outer search treats it as a poor point.
struct AcoResult {
  QuantizationSolution solution;
  double surrogate_bps = 0.0;
  double c_sum_bps = 0.0;
  int iterations = 0;
  bool feasible = false;
  double worst_slack = 0.0;
  std::vector<double> surrogate_trace_bps;
};

struct SumRateResult {
  double c_sum_bps = 0.0;
  TimeAllocation allocation;
  QuantizationSolution solution;
  bool feasible = false;
  double surrogate_bps = 0.0;
  double worst_slack = 0.0;
  int gss_iterations = 0;
  int inner_evaluations = 0;
  int total_aco_iterations = 0;
  int final_aco_iterations = 0;
};

struct GssResult {
  double alpha0 = 0.0;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

// Golden-section maximization of a unimodal objective over [0, 1]. After the
// interval collapses below gss_epsilon the midpoint, both interval ends and
// the endpoint alpha0 = 1 are all evaluated and the best probe is returned.
// Objective failures are rethrown with the probe alpha0 attached.
GssResult golden_section_search(const std::function<double(double)>& objective,
                                const SolverSettings& settings);

// Alternating inner loop at fixed alpha0: closed-form weight updates followed
// by the barrier-method distortion step, until the surrogate objective moves
// by less than aco_epsilon_bps. The surrogate is nondecreasing across
// iterations.
AcoResult aco_inner(double alpha0, const ChannelRealization& realization,
                    const LinkCapacities& capacities, const SystemConfig& system,
                    const SolverSettings& settings);

// Warm-started variant. Falls back to the default initializer when the given
// distortion is not strictly feasible at this alpha0.
AcoResult aco_inner(double alpha0, const ChannelRealization& realization,
                    const LinkCapacities& capacities, const SystemConfig& system,
                    const SolverSettings& settings, const std::vector<Matrix>& warm_start);

struct SubproblemDiagnostics {
  double gradient_norm = 0.0;
  double min_slack = 0.0;
  int iterations = 0;
};

// Distortion step: maximizes the concave surrogate objective at fixed weight
// matrices over PSD block-diagonal distortions subject to the subset
// constraints, via a logarithmic barrier on the constraint slacks plus a
// log-det barrier on each block, with Armijo backtracking ascent. `initial`
// must be strictly feasible.
std::vector<Matrix> solve_convex_subproblem(double alpha0,
                                            const std::vector<Matrix>& access_weight_blocks,
                                            const std::vector<Matrix>& fronthaul_weight,
                                            const ChannelRealization& realization,
                                            const SubsetConstraintSet& constraints,
                                            const SystemConfig& system,
                                            const SolverSettings& settings,
                                            const std::vector<Matrix>& initial,
                                            SubproblemDiagnostics* diagnostics = nullptr);

// Doubling search for a strictly feasible isotropic start d*I, beginning at
// the RF noise power and requiring 10% relative slack on every constraint.
// Returns nothing once d exceeds 1e12 times the noise power.
std::optional<std::vector<Matrix>> initialize_distortion(double alpha0,
                                                         const ChannelRealization& realization,
                                                         const LinkCapacities& capacities,
                                                         const SystemConfig& system,
                                                         const SolverSettings& settings);

// Minimal per-RU fronthaul time shares for a feasible distortion choice.
TimeAllocation recover_alpha(double alpha0, const std::vector<Matrix>& distortion,
                             const ChannelRealization& realization,
                             const LinkCapacities& capacities, const SystemConfig& system);

// alpha0 * w_rf * I(x, y_hat), in bits/s.
double evaluate_sum_rate(double alpha0, const std::vector<Matrix>& distortion,
                         const ChannelRealization& realization, const SystemConfig& system);

// Full outer/inner optimization for one fading block. The returned rate is
// never below the FSO-only vector-quantization benchmark on the same block.
SumRateResult optimize_sum_rate(const ChannelRealization& realization,
                                const LinkCapacities& capacities, const SystemConfig& system,
                                const SolverSettings& settings);

}  // namespace cranopt
