#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cranopt/baselines.hpp"
#include "cranopt/optimizer.hpp"

namespace cranopt {

enum class SweepAxis { none, alpha0_grid, d_fr, kappa };
enum class Scheme { hybrid, fso_vq, fso_sq };
enum class OutputFormat { csv, json };

std::string to_string(Scheme scheme);
std::string to_string(SweepAxis axis);

struct ExperimentSpec {
  SystemConfig system = desk_system_config();
  GeometryConfig geometry;
  SolverSettings solver;
  int trials = 100;
  std::uint64_t master_seed = 1;
  SweepAxis axis = SweepAxis::none;
  std::vector<double> sweep_values;  // empty for SweepAxis::none
  std::vector<Scheme> schemes = {Scheme::hybrid, Scheme::fso_vq, Scheme::fso_sq};
  int workers = 1;

  void validate() const;  // throws std::invalid_argument with field paths
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  double sweep_value = 0.0;
  Scheme scheme = Scheme::hybrid;
  double c_sum_mbps = 0.0;
  double alpha0 = 0.0;
  std::vector<double> alpha_m;
  std::vector<double> c_fso_mbps;
  std::vector<double> c_rf_mbps;
  int iters_gss = 0;
  int iters_aco = 0;
  std::string status;  // ok | infeasible | failed
  double wall_ms = 0.0;
};

struct SummaryRow {
  double sweep_value = 0.0;
  Scheme scheme = Scheme::hybrid;
  int records = 0;
  int excluded = 0;  // failed trials, not counted in the means
  double mean_c_sum_mbps = 0.0;
  double mean_alpha0 = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // sorted by (sweep value, trial, scheme)
  std::vector<SummaryRow> summary;
  int failed_records = 0;
};

// Runs every (sweep value, trial, scheme) cell. Per-trial seeds derive from
// the master seed by trial index only, so all sweep values see the same
// fading blocks and any worker count produces identical records. Solver
// failures are recorded per cell, not fatal; a failure rate above 5% throws.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// CSV columns:
//   trial,seed,sweep,scheme,c_sum_mbps,alpha0,alpha_m1..M,c_fso_mbps1..M,
//   c_rf_mbps1..M,iters_gss,iters_aco,status,wall_ms
// The JSON mirror is an array of objects with the same fields. All numbers
// carry 9 significant digits in both formats.
void emit_results(const std::vector<TrialRecord>& records, OutputFormat format,
                  const std::string& path);

// Key-value config file ("key = value", '#' comments) with Table-parameter
// names; values in dBm/dBi/dB convert to linear on load. Unknown keys are
// rejected. The loaded pairs overwrite fields of the given spec.
void apply_config_file(const std::string& path, ExperimentSpec& spec);

// K=8, N=8, L=64 and 1000 trials.
void apply_paper_scale(ExperimentSpec& spec);

// Round to 9 significant digits (the serialization precision).
double round9(double x);

}  // namespace cranopt
