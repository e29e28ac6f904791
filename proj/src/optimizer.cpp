#include "cranopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cranopt/baselines.hpp"
#include "cranopt/linalg.hpp"

namespace cranopt {

namespace {

constexpr double kGoldenRatio = 1.6180339887498949;
constexpr double kAlphaOneTol = 1e-12;
constexpr double kDoublingCap = 1e12;  // times the noise power

void check_alpha0(double alpha0) {
  if (!(alpha0 >= 0.0) || !(alpha0 <= 1.0)) {
    throw std::invalid_argument("alpha0 must lie in [0, 1]");
  }
}

struct InnerContext {
  const SystemConfig* system = nullptr;
  Matrix gram_full;                  // MN x MN received-signal covariance (no noise)
  std::vector<Matrix> gram_blocks;   // per-RU diagonal blocks
  SubsetConstraintSet cset_full;
  SubsetConstraintSet cset_fso;
};

InnerContext make_gram_context(const ChannelRealization& realization,
                               const SystemConfig& system) {
  system.validate();
  if (static_cast<int>(realization.access.size()) != system.num_rus) {
    throw std::invalid_argument("realization does not match system.num_rus");
  }
  InnerContext ctx;
  ctx.system = &system;
  const Matrix stacked = realization.stacked_access();
  ctx.gram_full = hermitian_part(stacked * system.mu_power_w.asDiagonal() * stacked.adjoint());
  ctx.gram_blocks.reserve(system.num_rus);
  const int n = system.ru_antennas;
  for (int m = 0; m < system.num_rus; ++m) {
    ctx.gram_blocks.push_back(ctx.gram_full.block(m * n, m * n, n, n));
  }
  return ctx;
}

InnerContext make_context(const ChannelRealization& realization, const LinkCapacities& capacities,
                          const SystemConfig& system) {
  InnerContext ctx = make_gram_context(realization, system);
  const double floor = 1e-6 * system.w_rf_hz;
  ctx.cset_full =
      build_subset_constraints(capacities.fso_bps, capacities.rf_bps, system.sample_rate_hz, floor);
  ctx.cset_fso =
      build_fso_singleton_constraints(capacities.fso_bps, system.sample_rate_hz, floor);
  return ctx;
}

// At alpha0 = 1 no RF fronthaul time exists, so the constraint family reduces
// to the per-RU FSO singletons.
const SubsetConstraintSet& active_set(const InnerContext& ctx, double alpha0) {
  return alpha0 >= 1.0 - kAlphaOneTol ? ctx.cset_fso : ctx.cset_full;
}

Vector exact_rates(const InnerContext& ctx, const std::vector<Matrix>& distortion,
                   double noise_w) {
  Vector rates(ctx.system->num_rus);
  for (int m = 0; m < ctx.system->num_rus; ++m) {
    rates(m) = fronthaul_mi_from_gram(ctx.gram_blocks[m], distortion[m], noise_w);
  }
  return rates;
}

// ---------------------------------------------------------------------------
// Distortion step (barrier ascent at fixed weight matrices)
// ---------------------------------------------------------------------------

struct DStepProblem {
  const InnerContext* ctx = nullptr;
  const SubsetConstraintSet* cset = nullptr;
  double alpha0 = 0.0;
  const std::vector<Matrix>* access_weight = nullptr;     // B blocks
  const std::vector<Matrix>* fronthaul_weight = nullptr;  // A blocks (upper-bound mode)
  bool plain = false;
  std::vector<double> rub_const;  // per-RU constant of the affine rate bound
};

struct BarrierEval {
  double phi = 0.0;
  double objective_bits = 0.0;  // log2|G+D+nI| - sum Tr(B_m D_m)/ln2
  double min_slack = std::numeric_limits<double>::infinity();
  Vector rates;  // per-RU constrained rate (bound or exact, by mode)
};

std::vector<double> precompute_rub_constants(const DStepProblem& p, double noise_w) {
  std::vector<double> k(p.ctx->gram_blocks.size());
  for (std::size_t m = 0; m < k.size(); ++m) {
    const Matrix& a = (*p.fronthaul_weight)[m];
    const Matrix& g = p.ctx->gram_blocks[m];
    const Eigen::Index n = g.rows();
    k[m] = -log_det2_hermitian_pd(a) +
           std::real((a * (g + noise_w * Matrix::Identity(n, n))).trace()) / kLn2 -
           static_cast<double>(n) / kLn2;
  }
  return k;
}

std::optional<BarrierEval> evaluate_barrier(const DStepProblem& p,
                                            const std::vector<Matrix>& distortion, double tau) {
  const SystemConfig& cfg = *p.ctx->system;
  const double noise_w = cfg.rf_noise_w;
  const Eigen::Index mn = p.ctx->gram_full.rows();

  Matrix signal = p.ctx->gram_full + noise_w * Matrix::Identity(mn, mn);
  Eigen::Index at = 0;
  for (const Matrix& d : distortion) {
    signal.block(at, at, d.rows(), d.rows()) += d;
    at += d.rows();
  }
  Eigen::LLT<Matrix> llt_signal(signal);
  if (llt_signal.info() != Eigen::Success) return std::nullopt;
  double logdet_signal = 0.0;
  for (Eigen::Index i = 0; i < mn; ++i) {
    logdet_signal += 2.0 * std::log2(std::real(llt_signal.matrixLLT()(i, i)));
  }

  BarrierEval eval;
  eval.objective_bits = logdet_signal;
  double barrier = 0.0;
  Vector rates(static_cast<Eigen::Index>(distortion.size()));
  for (std::size_t m = 0; m < distortion.size(); ++m) {
    const Matrix& d = distortion[m];
    Eigen::LLT<Matrix> llt_d(d);
    if (llt_d.info() != Eigen::Success) return std::nullopt;
    double logdet_d = 0.0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      logdet_d += 2.0 * std::log2(std::real(llt_d.matrixLLT()(i, i)));
    }
    eval.objective_bits -= std::real(((*p.access_weight)[m] * d).trace()) / kLn2;
    barrier += logdet_d * kLn2;  // natural-log det
    if (p.plain) {
      const Matrix& g = p.ctx->gram_blocks[m];
      rates(m) = log_det2_hermitian_pd(g + d + noise_w * Matrix::Identity(d.rows(), d.rows())) -
                 logdet_d;
    } else {
      rates(m) = p.rub_const[m] +
                 std::real(((*p.fronthaul_weight)[m] * d).trace()) / kLn2 - logdet_d;
    }
  }
  for (const SubsetConstraint& c : p.cset->constraints) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < c.members.size(); ++i) lhs += c.weights[i] * rates(c.members[i]);
    lhs *= p.alpha0 * p.cset->sample_rate_hz;
    const double slack = c.time_coeff * (1.0 - p.alpha0) + c.rhs - lhs;
    if (!(slack > 0.0)) return std::nullopt;
    eval.min_slack = std::min(eval.min_slack, slack);
    barrier += std::log(slack);
  }
  eval.phi = eval.objective_bits + tau * barrier;
  eval.rates = std::move(rates);
  return eval;
}

std::vector<Matrix> barrier_gradient(const DStepProblem& p, const std::vector<Matrix>& distortion,
                                     double tau, const Vector& rates) {
  const SystemConfig& cfg = *p.ctx->system;
  const double noise_w = cfg.rf_noise_w;
  const Eigen::Index mn = p.ctx->gram_full.rows();
  const std::size_t num_blocks = distortion.size();

  Matrix signal = p.ctx->gram_full + noise_w * Matrix::Identity(mn, mn);
  Eigen::Index at = 0;
  for (const Matrix& d : distortion) {
    signal.block(at, at, d.rows(), d.rows()) += d;
    at += d.rows();
  }
  const Matrix signal_inv =
      Eigen::LLT<Matrix>(signal).solve(Matrix::Identity(mn, mn));

  std::vector<Matrix> d_inv(num_blocks);
  std::vector<Matrix> cov_inv(num_blocks);  // plain mode only
  for (std::size_t m = 0; m < num_blocks; ++m) {
    const Matrix& d = distortion[m];
    const Eigen::Index n = d.rows();
    d_inv[m] = Eigen::LLT<Matrix>(d).solve(Matrix::Identity(n, n));
    if (p.plain) {
      const Matrix cov = p.ctx->gram_blocks[m] + d + noise_w * Matrix::Identity(n, n);
      cov_inv[m] = Eigen::LLT<Matrix>(cov).solve(Matrix::Identity(n, n));
    }
  }

  std::vector<Matrix> grad(num_blocks);
  at = 0;
  for (std::size_t m = 0; m < num_blocks; ++m) {
    const Eigen::Index n = distortion[m].rows();
    grad[m] = (signal_inv.block(at, at, n, n) - (*p.access_weight)[m]) / kLn2;
    grad[m] += tau * d_inv[m];
    at += n;
  }
  for (const SubsetConstraint& c : p.cset->constraints) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < c.members.size(); ++i) lhs += c.weights[i] * rates(c.members[i]);
    lhs *= p.alpha0 * p.cset->sample_rate_hz;
    const double slack = c.time_coeff * (1.0 - p.alpha0) + c.rhs - lhs;
    const double coef = tau * p.alpha0 * p.cset->sample_rate_hz / slack;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      const int m = c.members[i];
      const Matrix rate_grad =
          p.plain ? (cov_inv[m] - d_inv[m]) / kLn2 : ((*p.fronthaul_weight)[m] - d_inv[m]) / kLn2;
      grad[m] -= coef * c.weights[i] * rate_grad;
    }
  }
  for (Matrix& g : grad) g = hermitian_part(g);
  return grad;
}

std::vector<Matrix> d_step(const DStepProblem& p, const SolverSettings& settings, double tau_start,
                           double precision_relax, const std::vector<Matrix>& initial,
                           SubproblemDiagnostics* diagnostics) {
  std::vector<Matrix> current = initial;
  auto start_eval = evaluate_barrier(p, current, tau_start);
  if (!start_eval) {
    // Not strictly inside the feasible region; leave the iterate unchanged.
    if (diagnostics) *diagnostics = {};
    return current;
  }
  const double objective_at_start = start_eval->objective_bits;

  // Stationarity target: the gradient norm is driven below
  // sqrt(inner_rel_tol) of the weight-matrix scale, which bounds the
  // relative residual of the first-order condition by inner_rel_tol^(1/2).
  // Intermediate barrier stages only track the path and stop much earlier.
  double weight_scale2 = 0.0;
  for (const Matrix& b : *p.access_weight) weight_scale2 += b.squaredNorm();
  const double gradient_target =
      0.5 * precision_relax * std::sqrt(settings.inner_rel_tol * weight_scale2) / kLn2;

  int total_iterations = 0;
  double tau = tau_start;
  BarrierEval cur = *start_eval;
  for (;;) {
    cur = *evaluate_barrier(p, current, tau);
    const bool final_stage = tau <= settings.barrier_tau_floor * (1.0 + 1e-12);
    const double stage_target = final_stage ? gradient_target : 30.0 * gradient_target;
    double trial_step = 1.0;
    double window_anchor = cur.phi;
    for (int it = 0; it < settings.max_stage_iterations; ++it) {
      // Plateau exit: barrier stages whose objective has stopped moving are
      // done even if the gradient norm has not reached the target (first-order
      // steps stall in the stiff directions right at a constraint boundary).
      if (it % 10 == 0) {
        if (it > 0 && cur.phi - window_anchor <=
                          settings.inner_rel_tol * (1.0 + std::abs(cur.phi))) {
          break;
        }
        window_anchor = cur.phi;
      }
      const std::vector<Matrix> grad = barrier_gradient(p, current, tau, cur.rates);
      double gradient_norm2 = 0.0;
      for (const Matrix& g : grad) gradient_norm2 += g.squaredNorm();
      if (std::sqrt(gradient_norm2) <= stage_target) break;
      // Ascent in the metric of the current iterate: steps scale with the
      // distortion itself, which spans many decades across the sweep regimes.
      std::vector<Matrix> direction(grad.size());
      double slope = 0.0;
      for (std::size_t m = 0; m < grad.size(); ++m) {
        direction[m] = hermitian_part(current[m] * grad[m] * current[m]);
        slope += hermitian_inner(grad[m], direction[m]);
      }
      if (!(slope > 0.0)) break;

      double step = trial_step;
      bool accepted = false;
      std::vector<Matrix> candidate(grad.size());
      BarrierEval cand_eval;
      while (step > 1e-16 * trial_step) {
        for (std::size_t m = 0; m < grad.size(); ++m) {
          candidate[m] = hermitian_part(current[m] + step * direction[m]);
        }
        const auto eval = evaluate_barrier(p, candidate, tau);
        if (eval && eval->phi >= cur.phi + 1e-4 * step * slope) {
          cand_eval = *eval;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      // Let the trial step track the curvature along the scaled direction; a
      // fully accepted trial doubles it, a backtracked one resets near the
      // accepted value.
      trial_step = step == trial_step ? std::min(trial_step * 2.0, 1e12)
                                      : std::max(step * 2.0, 1e-12);
      current.swap(candidate);
      cur = cand_eval;
      ++total_iterations;
    }
    if (tau <= settings.barrier_tau_floor * (1.0 + 1e-12)) break;
    tau = std::max(tau * settings.barrier_tau_factor, settings.barrier_tau_floor);
  }

  // The barrier can trade true objective for interior distance; never hand a
  // worse point back to the alternating loop.
  if (cur.objective_bits < objective_at_start) {
    current = initial;
    cur = *evaluate_barrier(p, current, tau);
  }
  if (diagnostics) {
    const std::vector<Matrix> grad = barrier_gradient(p, current, tau, cur.rates);
    double norm2 = 0.0;
    for (const Matrix& g : grad) norm2 += g.squaredNorm();
    diagnostics->gradient_norm = std::sqrt(norm2);
    diagnostics->min_slack = cur.min_slack;
    diagnostics->iterations = total_iterations;
  }
  return current;
}

// ---------------------------------------------------------------------------
// Alternating inner loop
// ---------------------------------------------------------------------------

std::optional<std::vector<Matrix>> initialize_distortion_impl(double alpha0,
                                                              const InnerContext& ctx,
                                                              const SubsetConstraintSet& cset,
                                                              const SolverSettings& settings) {
  const double noise_w = ctx.system->rf_noise_w;
  const int n = ctx.system->ru_antennas;
  double d = settings.initial_distortion_scale > 0.0 ? settings.initial_distortion_scale : noise_w;
  const double cap = kDoublingCap * noise_w;
  while (d <= cap) {
    std::vector<Matrix> blocks(ctx.system->num_rus, d * Matrix::Identity(n, n));
    const Vector rates = exact_rates(ctx, blocks, noise_w);
    bool ok = true;
    for (const SubsetConstraint& c : cset.constraints) {
      double lhs = 0.0;
      for (std::size_t i = 0; i < c.members.size(); ++i) lhs += c.weights[i] * rates(c.members[i]);
      lhs *= alpha0 * cset.sample_rate_hz;
      const double rhs = c.time_coeff * (1.0 - alpha0) + c.rhs;
      if (lhs > 0.9 * rhs) {
        ok = false;
        break;
      }
    }
    if (ok) return blocks;
    d *= 2.0;
  }
  return std::nullopt;
}

std::vector<Matrix> access_weight_blocks_of(const std::vector<Matrix>& distortion,
                                            double noise_w) {
  std::vector<Matrix> blocks;
  blocks.reserve(distortion.size());
  for (const Matrix& d : distortion) {
    const Eigen::Index n = d.rows();
    blocks.push_back(hermitian_part(
        Eigen::LLT<Matrix>(d + noise_w * Matrix::Identity(n, n)).solve(Matrix::Identity(n, n))));
  }
  return blocks;
}

AcoResult finish_result(const InnerContext& ctx, double alpha0,
                        std::vector<Matrix> distortion, int iterations,
                        std::vector<double> trace) {
  const SystemConfig& cfg = *ctx.system;
  const double noise_w = cfg.rf_noise_w;
  AcoResult result;
  result.feasible = true;
  result.iterations = iterations;
  result.surrogate_trace_bps = std::move(trace);
  result.solution.distortion = std::move(distortion);
  const std::vector<Matrix> b_blocks = access_weight_blocks_of(result.solution.distortion, noise_w);
  result.solution.access_weight = block_diag(b_blocks);
  result.solution.fronthaul_weight.reserve(cfg.num_rus);
  for (int m = 0; m < cfg.num_rus; ++m) {
    result.solution.fronthaul_weight.push_back(
        optimal_weight_from_gram(ctx.gram_blocks[m], result.solution.distortion[m], noise_w));
  }
  result.c_sum_bps =
      alpha0 * cfg.w_rf_hz *
      access_mi_from_gram(ctx.gram_full, result.solution.distortion, noise_w);
  result.surrogate_bps = result.surrogate_trace_bps.empty() ? result.c_sum_bps
                                                            : result.surrogate_trace_bps.back();
  result.worst_slack =
      subset_feasible(alpha0, exact_rates(ctx, result.solution.distortion, noise_w),
                      active_set(ctx, alpha0))
          .worst_slack;
  return result;
}

AcoResult aco_inner_impl(double alpha0, const InnerContext& ctx, const SolverSettings& settings,
                         const std::vector<Matrix>* warm_start) {
  check_alpha0(alpha0);
  settings.validate();
  const SystemConfig& cfg = *ctx.system;
  const double noise_w = cfg.rf_noise_w;
  const SubsetConstraintSet& cset = active_set(ctx, alpha0);

  std::vector<Matrix> distortion;
  bool have_start = false;
  if (warm_start != nullptr) {
    const FeasibilityCheck check =
        subset_feasible(alpha0, exact_rates(ctx, *warm_start, noise_w), cset);
    if (check.worst_slack > 0.0) {
      distortion = *warm_start;
      have_start = true;
    }
  }
  if (!have_start) {
    auto init = initialize_distortion_impl(alpha0, ctx, cset, settings);
    if (!init) {
      AcoResult infeasible;
      infeasible.feasible = false;
      infeasible.c_sum_bps = 0.0;
      return infeasible;
    }
    distortion = std::move(*init);
  }

  // The objective scales with alpha0; nothing to optimize when it is zero.
  if (alpha0 <= 1e-15) {
    AcoResult result = finish_result(ctx, alpha0, std::move(distortion), 0, {0.0});
    result.c_sum_bps = 0.0;
    result.surrogate_bps = 0.0;
    return result;
  }

  const double scale = alpha0 * cfg.w_rf_hz;
  DStepProblem problem;
  problem.ctx = &ctx;
  problem.cset = &cset;
  problem.alpha0 = alpha0;
  problem.plain = settings.plain_constraints;

  std::vector<Matrix> b_blocks;
  std::vector<Matrix> a_blocks;
  std::vector<double> trace;
  double surrogate_prev = 0.0;
  bool converging = false;
  int iterations = 0;
  for (int i = 1; i <= settings.max_aco_iterations; ++i) {
    iterations = i;
    b_blocks = access_weight_blocks_of(distortion, noise_w);
    problem.access_weight = &b_blocks;
    if (!problem.plain) {
      a_blocks.clear();
      a_blocks.reserve(distortion.size());
      for (std::size_t m = 0; m < distortion.size(); ++m) {
        a_blocks.push_back(optimal_weight_from_gram(ctx.gram_blocks[m], distortion[m], noise_w));
      }
      problem.fronthaul_weight = &a_blocks;
      problem.rub_const = precompute_rub_constants(problem, noise_w);
    }
    // After the first pass the iterate already sits near the central path, so
    // later passes rejoin the barrier schedule further down. Full distortion
    // precision only matters once the surrogate is near its fixed point.
    const double tau_start =
        i == 1 ? settings.barrier_tau_start
               : std::max(settings.barrier_tau_floor,
                          settings.barrier_tau_start *
                              std::pow(settings.barrier_tau_factor, 4.0));
    const double relax = converging ? 1.0 : 30.0;
    distortion = d_step(problem, settings, tau_start, relax, distortion, nullptr);
    const double surrogate =
        scale * access_surrogate(ctx.gram_full, distortion, b_blocks, noise_w);
    trace.push_back(surrogate);
    if (std::abs(surrogate - surrogate_prev) <= settings.aco_epsilon_bps && converging) break;
    converging = std::abs(surrogate - surrogate_prev) <= 100.0 * settings.aco_epsilon_bps;
    surrogate_prev = surrogate;
  }
  return finish_result(ctx, alpha0, std::move(distortion), iterations, std::move(trace));
}

}  // namespace

void SolverSettings::validate() const {
  if (!(gss_epsilon > 0.0) || !(gss_epsilon < 1.0)) {
    throw std::invalid_argument("settings.gss_epsilon: must lie in (0, 1)");
  }
  if (!(aco_epsilon_bps > 0.0)) throw std::invalid_argument("settings.aco_epsilon_bps: must be > 0");
  if (!(barrier_tau_start > 0.0) || !(barrier_tau_factor > 0.0) ||
      barrier_tau_factor >= 1.0 || !(barrier_tau_floor > 0.0) ||
      barrier_tau_floor > barrier_tau_start) {
    throw std::invalid_argument("settings: barrier schedule must be positive and decreasing");
  }
  if (!(inner_rel_tol > 0.0)) throw std::invalid_argument("settings.inner_rel_tol: must be > 0");
  if (max_stage_iterations < 1 || max_aco_iterations < 1) {
    throw std::invalid_argument("settings: iteration limits must be >= 1");
  }
}

GssResult golden_section_search(const std::function<double(double)>& objective,
                                const SolverSettings& settings) {
  settings.validate();
  int evaluations = 0;
  const auto probe = [&](double alpha0) {
    ++evaluations;
    try {
      return objective(alpha0);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "golden_section_search: objective failed at alpha0=" << alpha0 << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
  };

  const double rho = 1.0 - 1.0 / kGoldenRatio;
  double lo = 0.0;
  double hi = 1.0;
  int iterations = 0;
  while (hi - lo > settings.gss_epsilon) {
    const double width = hi - lo;
    const double left = lo + rho * width;
    const double right = hi - rho * width;
    if (probe(left) >= probe(right)) {
      hi = right;
    } else {
      lo = left;
    }
    ++iterations;
  }

  // Also check the interval ends and alpha0 = 1, so a boundary optimum (an
  // FSO-only operating point) is returned exactly.
  const double mid = 0.5 * (lo + hi);
  GssResult best;
  best.alpha0 = mid;
  best.value = probe(mid);
  for (double candidate : {lo, hi, 1.0}) {
    const double value = probe(candidate);
    if (value > best.value) {
      best.alpha0 = candidate;
      best.value = value;
    }
  }
  best.iterations = iterations;
  best.evaluations = evaluations;
  return best;
}

AcoResult aco_inner(double alpha0, const ChannelRealization& realization,
                    const LinkCapacities& capacities, const SystemConfig& system,
                    const SolverSettings& settings) {
  const InnerContext ctx = make_context(realization, capacities, system);
  return aco_inner_impl(alpha0, ctx, settings, nullptr);
}

AcoResult aco_inner(double alpha0, const ChannelRealization& realization,
                    const LinkCapacities& capacities, const SystemConfig& system,
                    const SolverSettings& settings, const std::vector<Matrix>& warm_start) {
  const InnerContext ctx = make_context(realization, capacities, system);
  return aco_inner_impl(alpha0, ctx, settings, &warm_start);
}

std::vector<Matrix> solve_convex_subproblem(double alpha0,
                                            const std::vector<Matrix>& access_weight_blocks,
                                            const std::vector<Matrix>& fronthaul_weight,
                                            const ChannelRealization& realization,
                                            const SubsetConstraintSet& constraints,
                                            const SystemConfig& system,
                                            const SolverSettings& settings,
                                            const std::vector<Matrix>& initial,
                                            SubproblemDiagnostics* diagnostics) {
  check_alpha0(alpha0);
  settings.validate();
  const InnerContext ctx = make_gram_context(realization, system);
  DStepProblem problem;
  problem.ctx = &ctx;
  problem.cset = &constraints;
  problem.alpha0 = alpha0;
  problem.access_weight = &access_weight_blocks;
  problem.fronthaul_weight = &fronthaul_weight;
  problem.plain = settings.plain_constraints;
  if (!problem.plain) problem.rub_const = precompute_rub_constants(problem, system.rf_noise_w);
  if (!evaluate_barrier(problem, initial, settings.barrier_tau_start)) {
    throw std::runtime_error("solve_convex_subproblem: initial point is not strictly feasible");
  }
  return d_step(problem, settings, settings.barrier_tau_start, 1.0, initial, diagnostics);
}

std::optional<std::vector<Matrix>> initialize_distortion(double alpha0,
                                                         const ChannelRealization& realization,
                                                         const LinkCapacities& capacities,
                                                         const SystemConfig& system,
                                                         const SolverSettings& settings) {
  check_alpha0(alpha0);
  settings.validate();
  const InnerContext ctx = make_context(realization, capacities, system);
  return initialize_distortion_impl(alpha0, ctx, active_set(ctx, alpha0), settings);
}

TimeAllocation recover_alpha(double alpha0, const std::vector<Matrix>& distortion,
                             const ChannelRealization& realization,
                             const LinkCapacities& capacities, const SystemConfig& system) {
  check_alpha0(alpha0);
  const InnerContext ctx = make_context(realization, capacities, system);
  const Vector rates = exact_rates(ctx, distortion, system.rf_noise_w);
  TimeAllocation allocation;
  allocation.alpha0 = alpha0;
  allocation.alpha_m.resize(system.num_rus);
  double total = 0.0;
  for (int m = 0; m < system.num_rus; ++m) {
    const double needed = alpha0 * system.sample_rate_hz * rates(m) - capacities.fso_bps(m);
    if (needed <= 0.0) {
      allocation.alpha_m(m) = 0.0;
    } else if (capacities.rf_bps(m) > 0.0) {
      allocation.alpha_m(m) = needed / capacities.rf_bps(m);
    } else {
      throw std::logic_error("recover_alpha: dead RF link must be carried by the FSO link");
    }
    total += allocation.alpha_m(m);
  }
  if (total > 1.0 - alpha0 + 1e-6) {
    throw std::logic_error("recover_alpha: feasibility and recovery disagree");
  }
  return allocation;
}

double evaluate_sum_rate(double alpha0, const std::vector<Matrix>& distortion,
                         const ChannelRealization& realization, const SystemConfig& system) {
  check_alpha0(alpha0);
  return alpha0 * system.w_rf_hz *
         access_mutual_information(realization.stacked_access(), system.mu_power_w, distortion,
                                   system.rf_noise_w);
}

SumRateResult optimize_sum_rate(const ChannelRealization& realization,
                                const LinkCapacities& capacities, const SystemConfig& system,
                                const SolverSettings& settings) {
  settings.validate();
  const InnerContext ctx = make_context(realization, capacities, system);

  std::map<long long, AcoResult> cache;
  const auto key_of = [](double alpha0) { return std::llround(alpha0 * 1e12); };
  int total_aco_iterations = 0;
  const auto inner = [&](double alpha0) -> const AcoResult& {
    const long long key = key_of(alpha0);
    auto it = cache.find(key);
    if (it == cache.end()) {
      AcoResult result = alpha0 >= 1.0 - kAlphaOneTol
                             ? fso_only_inner(realization, capacities, system, settings)
                             : aco_inner_impl(alpha0, ctx, settings, nullptr);
      total_aco_iterations += result.iterations;
      it = cache.emplace(key, std::move(result)).first;
    }
    return it->second;
  };

  const GssResult gss =
      golden_section_search([&](double alpha0) { return inner(alpha0).c_sum_bps; }, settings);

  const AcoResult& best = inner(gss.alpha0);
  SumRateResult result;
  result.c_sum_bps = best.c_sum_bps;
  result.solution = best.solution;
  result.feasible = best.feasible;
  result.surrogate_bps = best.surrogate_bps;
  result.worst_slack = best.worst_slack;
  result.gss_iterations = gss.iterations;
  result.inner_evaluations = static_cast<int>(cache.size());
  result.total_aco_iterations = total_aco_iterations;
  result.final_aco_iterations = best.iterations;
  if (best.feasible) {
    result.allocation =
        recover_alpha(gss.alpha0, best.solution.distortion, realization, capacities, system);
  } else {
    result.allocation.alpha0 = gss.alpha0;
    result.allocation.alpha_m = Vector::Zero(system.num_rus);
  }
  return result;
}

}  // namespace cranopt
