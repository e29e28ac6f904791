// End-to-end acceptance suite. Each case prints one pass/fail line with its
// wall time; run through ctest or directly as build/tests/acceptance_tests.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "cranopt/baselines.hpp"
#include "cranopt/harness.hpp"
#include "cranopt/linalg.hpp"
#include "scalar_grid_oracle.hpp"

using namespace cranopt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool report(int index, const char* name, bool ok, double seconds) {
  std::printf("criterion %2d [%s]: %s (%.1f s)\n", index, name, ok ? "PASS" : "FAIL", seconds);
  std::fflush(stdout);
  return ok;
}

Matrix random_hermitian_pd(int n, Rng& rng) {
  Matrix a(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) a(r, c) = rng.complex_normal();
  }
  return hermitian_part(a * a.adjoint()) + 0.1 * Matrix::Identity(n, n);
}

// Shared 100-trial desk-scale sweep over the three attenuation regimes,
// reused by the dominance and trend criteria.
const ExperimentResult& desk_kappa_sweep() {
  static const ExperimentResult result = [] {
    ExperimentSpec spec;
    spec.trials = 100;
    spec.master_seed = 7;
    spec.axis = SweepAxis::kappa;
    spec.sweep_values = {4.2e-3, 42e-3, 125e-3};
    spec.schemes = {Scheme::hybrid, Scheme::fso_vq, Scheme::fso_sq};
    return run_experiment(spec);
  }();
  return result;
}

}  // namespace

TEST_CASE("criterion 1: subset constraints match the minimal-time oracle") {
  const auto start = Clock::now();
  Rng rng(1001);
  int checked = 0;
  int disagreements = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform() * 3.0 - 1e-12);
    Vector fso(m);
    Vector rf(m);
    Vector rate(m);
    for (int i = 0; i < m; ++i) {
      fso(i) = std::pow(10.0, 6.0 * rng.uniform());
      rf(i) = std::pow(10.0, 6.0 * rng.uniform());
      rate(i) = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
    }
    const double f_s = std::pow(10.0, 3.0 * rng.uniform());
    const double alpha0 = rng.uniform();
    const SubsetConstraintSet set = build_subset_constraints(fso, rf, f_s, 0.0);
    const bool via_subsets = subset_feasible(alpha0, rate, set).feasible;
    const bool via_minimal = minimal_time_feasible(alpha0, rate, fso, rf, f_s).feasible;
    ++checked;
    if (via_subsets != via_minimal) ++disagreements;
  }
  const double elapsed = seconds_since(start);
  const bool ok = checked == 10000 && disagreements == 0 && elapsed < 10.0;
  CHECK(report(1, "constraint-family equivalence", ok, elapsed));
  CHECK(disagreements == 0);
  CHECK(elapsed < 10.0);
}

TEST_CASE("criterion 2: variational log-det identity") {
  const auto start = Clock::now();
  Rng rng(1002);
  double worst_residual = 0.0;
  double worst_stationarity = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 8.0 - 1e-12);
    const Matrix x = random_hermitian_pd(n, rng);
    const SurrogateIdentityCheck check = surrogate_identity_check(x, rng);
    worst_residual = std::max(worst_residual, check.residual);
    worst_stationarity = std::max(worst_stationarity, check.stationarity);
  }
  const double elapsed = seconds_since(start);
  const bool ok = worst_residual < 1e-9 && worst_stationarity < 1e-4 && elapsed < 10.0;
  CHECK(report(2, "log-det surrogate identity", ok, elapsed));
  CHECK(worst_residual < 1e-9);
  CHECK(worst_stationarity < 1e-4);
  CHECK(elapsed < 10.0);
}

TEST_CASE("criterion 3: water-filling budget and closed forms") {
  const auto start = Clock::now();
  Rng rng(1003);
  double worst_budget = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = 2 + static_cast<int>(rng.uniform() * 6.0 - 1e-12);
    const int cols = 1 + static_cast<int>(rng.uniform() * 4.0 - 1e-12);
    Matrix f(rows, cols);
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) f(r, c) = rng.complex_normal();
    }
    const double power = std::pow(10.0, 4.0 * rng.uniform() - 2.0);
    const double noise = std::pow(10.0, 2.0 * rng.uniform() - 1.0);
    const WaterfillResult result = waterfill_rf_capacity(f, power, noise, 1.0);
    Eigen::JacobiSVD<Matrix> svd(f);
    double spent = 0.0;
    for (int j = 0; j < svd.singularValues().size(); ++j) {
      const double chi = svd.singularValues()(j);
      if (chi > 0.0) spent += std::max(0.0, result.water_level - noise / (chi * chi));
    }
    worst_budget = std::max(worst_budget, std::abs(spent - power) / power);
  }

  Matrix one(1, 1);
  one(0, 0) = 2.0;
  const WaterfillResult single = waterfill_rf_capacity(one, 3.0, 1.0, 1.0);
  const double single_err =
      std::abs(single.capacity_bps - std::log2(13.0)) +
      std::abs(single.water_level - 3.25);

  Matrix pair = Matrix::Zero(2, 2);
  pair(0, 0) = 2.0;
  pair(1, 1) = 1.0;
  const double w_rf = 40e6;
  const WaterfillResult hand = waterfill_rf_capacity(pair, 1.0, 1.0, w_rf);
  const double expected = (std::log2(4.5) + std::log2(1.125)) * w_rf;
  const double hand_rel = std::abs(hand.capacity_bps - expected) / expected;

  const double elapsed = seconds_since(start);
  const bool ok = worst_budget < 1e-9 && single_err < 1e-9 && hand_rel < 1e-6;
  CHECK(report(3, "water-filling", ok, elapsed));
  CHECK(worst_budget < 1e-9);
  CHECK(single_err < 1e-9);
  CHECK(hand_rel < 1e-6);
}

TEST_CASE("criterion 4: binary-input capacity limits and oracle agreement") {
  const auto start = Clock::now();
  const double w_fso = 1e9;
  const double zero_limit = fso_capacity(0.0, 1.0, 1.0, w_fso);
  const double top_limit = fso_capacity(1e6, 1.0, 1.0, w_fso);
  bool grid_ok = true;
  int stream = 0;
  for (double snr : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    Rng rng(derive_seed(1004, stream++));
    const OokOracleEstimate est = ook_capacity_oracle(snr, 1000000, rng);
    const double tol = std::max(0.01, 3.0 * est.std_error);
    if (std::abs(ook_capacity_bits(snr) - est.bits_per_use) > tol) grid_ok = false;
  }
  const double elapsed = seconds_since(start);
  const bool ok = zero_limit == 0.0 && std::abs(top_limit - w_fso) <= 1e-6 * w_fso && grid_ok &&
                  elapsed < 30.0;
  CHECK(report(4, "optical-link capacity", ok, elapsed));
  CHECK(zero_limit == 0.0);
  CHECK(std::abs(top_limit - w_fso) <= 1e-6 * w_fso);
  CHECK(grid_ok);
  CHECK(elapsed < 30.0);
}

TEST_CASE("criterion 5: scalar instances against the exhaustive grid") {
  const auto start = Clock::now();
  Rng rng(1005);
  SolverSettings settings;
  int failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    SystemConfig system;
    system.num_mus = 1;
    system.num_rus = 1;
    system.ru_antennas = 1;
    system.cu_antennas = 1;
    system.mu_power_w = Vector::Constant(1, std::pow(10.0, 3.0 * rng.uniform()));
    system.ru_rf_power_w = Vector::Constant(1, 1.0);
    system.ru_fso_power_w = Vector::Constant(1, 1.0);
    system.rf_noise_w = 1.0;
    system.fso_noise_a2 = 1.0;
    system.w_rf_hz = 40e6;
    system.w_fso_hz = 1e9;
    system.sample_rate_hz = 40e6;
    ChannelRealization realization;
    realization.access = {Matrix::Identity(1, 1)};
    realization.fronthaul_rf = {Matrix::Identity(1, 1)};
    realization.fso_gain = Vector::Constant(1, 1.0);
    LinkCapacities caps;
    caps.fso_bps = Vector::Constant(1, std::pow(10.0, 6.0 + 3.0 * rng.uniform()));
    caps.rf_bps = Vector::Constant(1, std::pow(10.0, 6.0 + 3.0 * rng.uniform()));

    const SumRateResult opt = optimize_sum_rate(realization, caps, system, settings);
    const double grid_best = testing_oracles::scalar_grid_oracle(
        system.mu_power_w(0), 1.0, caps.fso_bps(0), caps.rf_bps(0), system.sample_rate_hz,
        system.w_rf_hz);
    const double gap = std::abs(opt.c_sum_bps - grid_best) / std::max(grid_best, 1.0);
    worst = std::max(worst, gap);
    if (gap > 0.01) ++failures;
  }
  const double elapsed = seconds_since(start);
  const bool ok = failures == 0 && elapsed < 300.0;
  CHECK(report(5, "scalar grid oracle", ok, elapsed));
  CHECK(failures == 0);
  CHECK(elapsed < 300.0);
  MESSAGE("worst relative gap: ", worst);
}

TEST_CASE("criterion 6: alternating loop monotonicity and termination") {
  const auto start = Clock::now();
  SystemConfig system = desk_system_config();
  GeometryConfig geometry;
  SolverSettings settings;
  int violations = 0;
  int non_terminating = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelRealization realization =
        generate_realization(system, geometry, derive_seed(1006, trial));
    const LinkCapacities caps = compute_link_capacities(realization, system);
    const AcoResult result = aco_inner(0.5, realization, caps, system, settings);
    if (!result.feasible) continue;
    for (std::size_t i = 1; i < result.surrogate_trace_bps.size(); ++i) {
      if (result.surrogate_trace_bps[i] <
          result.surrogate_trace_bps[i - 1] -
              1e-9 * std::abs(result.surrogate_trace_bps[i - 1])) {
        ++violations;
      }
    }
    if (result.iterations >= settings.max_aco_iterations) ++non_terminating;
    const std::size_t k = result.surrogate_trace_bps.size();
    if (k >= 2) {
      const double last_delta =
          std::abs(result.surrogate_trace_bps[k - 1] - result.surrogate_trace_bps[k - 2]);
      if (last_delta > settings.aco_epsilon_bps) ++non_terminating;
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = violations == 0 && non_terminating == 0 && elapsed < 600.0;
  CHECK(report(6, "alternating-loop monotonicity", ok, elapsed));
  CHECK(violations == 0);
  CHECK(non_terminating == 0);
  CHECK(elapsed < 600.0);
}

TEST_CASE("criterion 7: analytic gradients against central differences") {
  const auto start = Clock::now();
  Rng rng(1007);
  const double noise = 0.8;
  const double fd_step = 1e-5;
  int failures = 0;
  std::vector<Matrix> basis;
  for (int i = 0; i < 2; ++i) {
    Matrix e = Matrix::Zero(2, 2);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  {
    Matrix e = Matrix::Zero(2, 2);
    e(0, 1) = 1.0;
    e(1, 0) = 1.0;
    basis.push_back(e);
    Matrix f = Matrix::Zero(2, 2);
    f(0, 1) = Complex(0.0, 1.0);
    f(1, 0) = Complex(0.0, -1.0);
    basis.push_back(f);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix gram = random_hermitian_pd(2, rng);
    const Matrix d = random_hermitian_pd(2, rng);
    const Matrix b = random_hermitian_pd(2, rng);
    const Matrix a = random_hermitian_pd(2, rng);
    const std::vector<Matrix> grad = access_surrogate_gradient(gram, {d}, {b}, noise);
    const Matrix rgrad = rub_gradient(d, a);
    for (const Matrix& e : basis) {
      const double fd_bracket = (access_surrogate(gram, {d + fd_step * e}, {b}, noise) -
                                 access_surrogate(gram, {d - fd_step * e}, {b}, noise)) /
                                (2.0 * fd_step);
      const double an_bracket = hermitian_inner(grad[0], e);
      if (std::abs(fd_bracket - an_bracket) >
          1e-5 * std::max(1.0, std::abs(an_bracket))) {
        ++failures;
      }
      const double fd_rub = (rub_from_gram(gram, d + fd_step * e, a, noise) -
                             rub_from_gram(gram, d - fd_step * e, a, noise)) /
                            (2.0 * fd_step);
      const double an_rub = hermitian_inner(rgrad, e);
      if (std::abs(fd_rub - an_rub) > 1e-5 * std::max(1.0, std::abs(an_rub))) ++failures;
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = failures == 0;
  CHECK(report(7, "gradient checks", ok, elapsed));
  CHECK(failures == 0);
}

TEST_CASE("criterion 8: dominance chain across weather regimes") {
  const auto start = Clock::now();
  const ExperimentResult& sweep = desk_kappa_sweep();
  std::map<std::pair<double, int>, std::map<int, double>> cells;
  for (const TrialRecord& r : sweep.records) {
    cells[{r.sweep_value, r.trial}][static_cast<int>(r.scheme)] = r.c_sum_mbps;
  }
  int violations = 0;
  for (const auto& [key, values] : cells) {
    const double hybrid = values.at(static_cast<int>(Scheme::hybrid));
    const double vq = values.at(static_cast<int>(Scheme::fso_vq));
    const double sq = values.at(static_cast<int>(Scheme::fso_sq));
    if (hybrid < vq * (1.0 - 1e-6) || vq < sq * (1.0 - 1e-6)) ++violations;
  }
  const double elapsed = seconds_since(start);
  const bool ok = violations == 0 && sweep.failed_records == 0 && cells.size() == 300;
  CHECK(report(8, "dominance chain", ok, elapsed));
  CHECK(violations == 0);
  CHECK(sweep.failed_records == 0);
}

TEST_CASE("criterion 9: rate-versus-share shape and attenuation trend") {
  const auto start = Clock::now();

  // Per-trial unimodality of the 21-point fixed-share curve at moderate fog.
  ExperimentSpec spec;
  spec.trials = 100;
  spec.master_seed = 7;
  spec.axis = SweepAxis::alpha0_grid;
  spec.geometry.kappa_db_per_m = 42e-3;
  spec.schemes = {Scheme::hybrid};
  for (int i = 0; i <= 20; ++i) spec.sweep_values.push_back(static_cast<double>(i) / 20.0);
  const ExperimentResult grid = run_experiment(spec);

  int unimodal = 0;
  for (int trial = 0; trial < spec.trials; ++trial) {
    std::vector<double> curve(21, 0.0);
    double peak = 0.0;
    for (const TrialRecord& r : grid.records) {
      if (r.trial != trial) continue;
      const int i = static_cast<int>(std::lround(r.sweep_value * 20.0));
      curve[i] = r.c_sum_mbps;
      peak = std::max(peak, r.c_sum_mbps);
    }
    const double band = 1e-9 * std::max(peak, 1.0);
    bool fell = false;
    bool ok_shape = true;
    for (int i = 0; i + 1 < 21; ++i) {
      const double diff = curve[i + 1] - curve[i];
      if (std::abs(diff) <= band) continue;  // plateau
      if (diff < 0.0) {
        fell = true;
      } else if (fell) {
        ok_shape = false;  // rose again after falling
        break;
      }
    }
    if (ok_shape) ++unimodal;
  }

  // Mean optimal share is nonincreasing as the attenuation grows.
  const ExperimentResult& sweep = desk_kappa_sweep();
  std::vector<double> mean_alpha0;
  for (double kappa : {4.2e-3, 42e-3, 125e-3}) {
    for (const SummaryRow& row : sweep.summary) {
      if (row.scheme == Scheme::hybrid && row.sweep_value == kappa) {
        mean_alpha0.push_back(row.mean_alpha0);
      }
    }
  }
  const bool trend_ok = mean_alpha0.size() == 3 && mean_alpha0[0] >= mean_alpha0[1] - 1e-9 &&
                        mean_alpha0[1] >= mean_alpha0[2] - 1e-9;

  const double elapsed = seconds_since(start);
  const bool ok = unimodal >= 90 && trend_ok;
  CHECK(report(9, "rate-vs-share shape", ok, elapsed));
  CHECK(unimodal >= 90);
  CHECK(trend_ok);
  MESSAGE("unimodal trials: ", unimodal, ", mean alpha0: ", mean_alpha0[0], " ", mean_alpha0[1],
          " ", mean_alpha0[2]);
}

TEST_CASE("criterion 10: heavy-fog distance trend") {
  const auto start = Clock::now();
  ExperimentSpec spec;
  spec.trials = 100;
  spec.master_seed = 7;
  spec.axis = SweepAxis::d_fr;
  spec.sweep_values = {100.0, 400.0};
  spec.geometry.kappa_db_per_m = 125e-3;
  spec.schemes = {Scheme::hybrid, Scheme::fso_vq, Scheme::fso_sq};
  const ExperimentResult result = run_experiment(spec);

  std::map<std::pair<int, double>, double> means;
  for (const SummaryRow& row : result.summary) {
    means[{static_cast<int>(row.scheme), row.sweep_value}] = row.mean_c_sum_mbps;
  }
  const double sq_near = means[{static_cast<int>(Scheme::fso_sq), 100.0}];
  const double sq_far = means[{static_cast<int>(Scheme::fso_sq), 400.0}];
  const double vq_near = means[{static_cast<int>(Scheme::fso_vq), 100.0}];
  const double vq_far = means[{static_cast<int>(Scheme::fso_vq), 400.0}];
  const double hy_near = means[{static_cast<int>(Scheme::hybrid), 100.0}];
  const double hy_far = means[{static_cast<int>(Scheme::hybrid), 400.0}];

  const double elapsed = seconds_since(start);
  const bool fso_collapses = sq_far < 0.01 * sq_near && vq_far < 0.01 * vq_near;
  const bool hybrid_survives = hy_far > 0.1 * hy_near && hy_far > 0.0;
  const bool ok = fso_collapses && hybrid_survives && elapsed < 900.0;
  CHECK(report(10, "heavy-fog distance trend", ok, elapsed));
  CHECK(fso_collapses);
  CHECK(hybrid_survives);
  CHECK(elapsed < 900.0);
  MESSAGE("sq ", sq_near, "->", sq_far, " vq ", vq_near, "->", vq_far, " hybrid ", hy_near, "->",
          hy_far);
}
