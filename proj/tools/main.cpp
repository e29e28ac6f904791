#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cranopt/harness.hpp"

namespace {

using cranopt::ExperimentSpec;
using cranopt::Scheme;
using cranopt::SweepAxis;

struct CommonOptions {
  std::string config_path;
  std::uint64_t seed = 1;
  int trials = 100;
  int workers = 1;
  std::string out_path = "results.csv";
  std::string format = "csv";
  bool paper_scale = false;
  std::vector<std::string> schemes = {"hybrid", "vq", "sq"};
};

void add_common(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--config", opts->config_path, "key = value parameter file");
  cmd->add_option("--seed", opts->seed, "master seed for the fading blocks");
  cmd->add_option("--trials", opts->trials, "fading blocks per sweep point");
  cmd->add_option("--workers", opts->workers, "worker threads");
  cmd->add_option("--out", opts->out_path, "output file path");
  cmd->add_option("--format", opts->format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--paper-scale", opts->paper_scale, "K=8, N=8, L=64 and 1000 trials");
}

Scheme parse_scheme(const std::string& name) {
  if (name == "hybrid") return Scheme::hybrid;
  if (name == "vq" || name == "fso_vq") return Scheme::fso_vq;
  if (name == "sq" || name == "fso_sq") return Scheme::fso_sq;
  throw CLI::ValidationError("--schemes", "unknown scheme '" + name + "'");
}

ExperimentSpec build_spec(const CommonOptions& opts, const CLI::App* cmd) {
  ExperimentSpec spec;
  if (!opts.config_path.empty()) cranopt::apply_config_file(opts.config_path, spec);
  if (opts.paper_scale) cranopt::apply_paper_scale(spec);
  if (cmd->count("--trials") > 0 || !opts.paper_scale) spec.trials = opts.trials;
  spec.master_seed = opts.seed;
  spec.workers = opts.workers;
  return spec;
}

void print_summary(const cranopt::ExperimentResult& result, SweepAxis axis) {
  std::printf("%-10s %-8s %8s %8s %14s %10s\n", to_string(axis).c_str(), "scheme", "records",
              "failed", "mean_mbps", "mean_a0");
  for (const cranopt::SummaryRow& row : result.summary) {
    std::printf("%-10.6g %-8s %8d %8d %14.4f %10.4f\n", row.sweep_value,
                to_string(row.scheme).c_str(), row.records, row.excluded, row.mean_c_sum_mbps,
                row.mean_alpha0);
  }
}

int run_spec(ExperimentSpec spec, const CommonOptions& opts) {
  spec.validate();
  const cranopt::ExperimentResult result = cranopt::run_experiment(spec);
  cranopt::emit_results(result.records,
                        opts.format == "json" ? cranopt::OutputFormat::json
                                              : cranopt::OutputFormat::csv,
                        opts.out_path);
  print_summary(result, spec.axis);
  std::printf("wrote %zu records to %s\n", result.records.size(), opts.out_path.c_str());
  const double failure_rate =
      static_cast<double>(result.failed_records) / static_cast<double>(result.records.size());
  if (failure_rate > 0.05) {
    std::fprintf(stderr, "error: %.1f%% of records failed (budget is 5%%)\n",
                 100.0 * failure_rate);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-rate experiments for a C-RAN uplink with hybrid RF/FSO fronthaul"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "single experiment over fading blocks");
  add_common(run_cmd, &run_opts);
  run_cmd->add_option("--schemes", run_opts.schemes, "subset of {hybrid, vq, sq}")
      ->delimiter(',');

  CommonOptions sweep_opts;
  std::string sweep_axis = "alpha0";
  std::vector<double> sweep_values;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep one axis over fading blocks");
  add_common(sweep_cmd, &sweep_opts);
  sweep_cmd->add_option("--axis", sweep_axis, "alpha0, d_fr or kappa")
      ->required()
      ->check(CLI::IsMember({"alpha0", "d_fr", "kappa"}));
  sweep_cmd->add_option("--values", sweep_values, "sweep points")->required()->delimiter(',');
  sweep_cmd->add_option("--schemes", sweep_opts.schemes, "subset of {hybrid, vq, sq}")
      ->delimiter(',');

  CommonOptions baseline_opts;
  std::string baseline_scheme;
  CLI::App* baseline_cmd = app.add_subcommand("baseline", "one FSO-only benchmark scheme");
  add_common(baseline_cmd, &baseline_opts);
  baseline_cmd->add_option("--scheme", baseline_scheme, "sq or vq")
      ->required()
      ->check(CLI::IsMember({"sq", "vq"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      ExperimentSpec spec = build_spec(run_opts, run_cmd);
      spec.schemes.clear();
      for (const std::string& name : run_opts.schemes) spec.schemes.push_back(parse_scheme(name));
      return run_spec(std::move(spec), run_opts);
    }
    if (sweep_cmd->parsed()) {
      ExperimentSpec spec = build_spec(sweep_opts, sweep_cmd);
      if (sweep_axis == "alpha0") spec.axis = SweepAxis::alpha0_grid;
      if (sweep_axis == "d_fr") spec.axis = SweepAxis::d_fr;
      if (sweep_axis == "kappa") spec.axis = SweepAxis::kappa;
      spec.sweep_values = sweep_values;
      spec.schemes.clear();
      for (const std::string& name : sweep_opts.schemes) {
        spec.schemes.push_back(parse_scheme(name));
      }
      return run_spec(std::move(spec), sweep_opts);
    }
    ExperimentSpec spec = build_spec(baseline_opts, baseline_cmd);
    spec.schemes = {parse_scheme(baseline_scheme)};
    return run_spec(std::move(spec), baseline_opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
