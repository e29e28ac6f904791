#include "cranopt/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace cranopt {

namespace {

using Clock = std::chrono::steady_clock;

std::string format9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Cell {
  int sweep_index;
  int trial;
};

GeometryConfig geometry_for(const ExperimentSpec& spec, double sweep_value) {
  GeometryConfig geometry = spec.geometry;
  if (spec.axis == SweepAxis::d_fr) geometry.d_fr = sweep_value;
  if (spec.axis == SweepAxis::kappa) geometry.kappa_db_per_m = sweep_value;
  return geometry;
}

TrialRecord run_scheme(const ExperimentSpec& spec, Scheme scheme, double sweep_value,
                       const ChannelRealization& realization, const LinkCapacities& capacities) {
  TrialRecord record;
  record.scheme = scheme;
  record.alpha_m.assign(spec.system.num_rus, 0.0);
  const auto start = Clock::now();
  switch (scheme) {
    case Scheme::hybrid: {
      if (spec.axis == SweepAxis::alpha0_grid) {
        const AcoResult inner =
            aco_inner(sweep_value, realization, capacities, spec.system, spec.solver);
        record.alpha0 = sweep_value;
        record.c_sum_mbps = inner.c_sum_bps / 1e6;
        record.iters_aco = inner.iterations;
        record.status = inner.feasible ? "ok" : "infeasible";
        if (inner.feasible) {
          const TimeAllocation allocation = recover_alpha(
              sweep_value, inner.solution.distortion, realization, capacities, spec.system);
          for (int m = 0; m < spec.system.num_rus; ++m) record.alpha_m[m] = allocation.alpha_m(m);
        }
      } else {
        const SumRateResult result =
            optimize_sum_rate(realization, capacities, spec.system, spec.solver);
        record.alpha0 = result.allocation.alpha0;
        record.c_sum_mbps = result.c_sum_bps / 1e6;
        record.iters_gss = result.gss_iterations;
        record.iters_aco = result.total_aco_iterations;
        record.status = result.feasible ? "ok" : "infeasible";
        for (int m = 0; m < spec.system.num_rus; ++m) {
          record.alpha_m[m] = result.allocation.alpha_m(m);
        }
      }
      break;
    }
    case Scheme::fso_vq: {
      const BaselineResult result = fso_vq(realization, capacities, spec.system, spec.solver);
      record.alpha0 = 1.0;
      record.c_sum_mbps = result.c_sum_bps / 1e6;
      record.iters_aco = result.aco_iterations;
      record.status = "ok";
      break;
    }
    case Scheme::fso_sq: {
      const BaselineResult result = fso_sq(realization, capacities, spec.system);
      record.alpha0 = 1.0;
      record.c_sum_mbps = result.c_sum_bps / 1e6;
      record.status = "ok";
      break;
    }
  }
  record.wall_ms = millis_since(start);
  return record;
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::hybrid:
      return "hybrid";
    case Scheme::fso_vq:
      return "fso_vq";
    case Scheme::fso_sq:
      return "fso_sq";
  }
  return "?";
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::none:
      return "none";
    case SweepAxis::alpha0_grid:
      return "alpha0";
    case SweepAxis::d_fr:
      return "d_fr";
    case SweepAxis::kappa:
      return "kappa";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  system.validate();
  geometry.validate();
  solver.validate();
  if (trials < 1) throw std::invalid_argument("spec.trials: must be >= 1");
  if (workers < 1) throw std::invalid_argument("spec.workers: must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("spec.schemes: at least one scheme");
  if (axis == SweepAxis::none) {
    if (!sweep_values.empty()) {
      throw std::invalid_argument("spec.sweep_values: must be empty without a sweep axis");
    }
  } else if (sweep_values.empty()) {
    throw std::invalid_argument("spec.sweep_values: sweep axis requires values");
  }
  for (double v : sweep_values) {
    if (axis == SweepAxis::alpha0_grid && (v < 0.0 || v > 1.0)) {
      throw std::invalid_argument("spec.sweep_values: alpha0 grid points must lie in [0, 1]");
    }
    if ((axis == SweepAxis::d_fr && v <= 0.0) || (axis == SweepAxis::kappa && v < 0.0)) {
      throw std::invalid_argument("spec.sweep_values: out of range for the sweep axis");
    }
  }
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::vector<double> sweeps =
      spec.axis == SweepAxis::none ? std::vector<double>{0.0} : spec.sweep_values;
  const int num_schemes = static_cast<int>(spec.schemes.size());

  std::vector<Cell> cells;
  cells.reserve(sweeps.size() * static_cast<std::size_t>(spec.trials));
  for (int s = 0; s < static_cast<int>(sweeps.size()); ++s) {
    for (int t = 0; t < spec.trials; ++t) cells.push_back({s, t});
  }

  ExperimentResult out;
  out.records.resize(cells.size() * num_schemes);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      const Cell cell = cells[c];
      const double sweep_value = sweeps[cell.sweep_index];
      const std::uint64_t seed = derive_seed(spec.master_seed, cell.trial);
      ChannelRealization realization;
      LinkCapacities capacities;
      bool generated = false;
      std::string failure;
      try {
        realization =
            generate_realization(spec.system, geometry_for(spec, sweep_value), seed);
        capacities = compute_link_capacities(realization, spec.system);
        generated = true;
      } catch (const std::exception& e) {
        failure = e.what();
      }
      for (int k = 0; k < num_schemes; ++k) {
        TrialRecord record;
        if (generated) {
          try {
            record = run_scheme(spec, spec.schemes[k], sweep_value, realization, capacities);
            record.c_fso_mbps.resize(spec.system.num_rus);
            record.c_rf_mbps.resize(spec.system.num_rus);
            for (int m = 0; m < spec.system.num_rus; ++m) {
              record.c_fso_mbps[m] = capacities.fso_bps(m) / 1e6;
              record.c_rf_mbps[m] = capacities.rf_bps(m) / 1e6;
            }
          } catch (const std::exception& e) {
            record = TrialRecord{};
            record.scheme = spec.schemes[k];
            record.status = "failed";
            (void)e;
          }
        } else {
          record.scheme = spec.schemes[k];
          record.status = "failed";
        }
        record.trial = cell.trial;
        record.seed = seed;
        record.sweep_value = sweep_value;
        if (record.alpha_m.empty()) record.alpha_m.assign(spec.system.num_rus, 0.0);
        if (record.c_fso_mbps.empty()) record.c_fso_mbps.assign(spec.system.num_rus, 0.0);
        if (record.c_rf_mbps.empty()) record.c_rf_mbps.assign(spec.system.num_rus, 0.0);
        out.records[c * num_schemes + k] = std::move(record);
      }
    }
  };

  const int worker_count = std::min<int>(spec.workers, static_cast<int>(cells.size()));
  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (int s = 0; s < static_cast<int>(sweeps.size()); ++s) {
    for (int k = 0; k < num_schemes; ++k) {
      SummaryRow row;
      row.sweep_value = sweeps[s];
      row.scheme = spec.schemes[k];
      double c_sum = 0.0;
      double alpha0 = 0.0;
      int counted = 0;
      for (int t = 0; t < spec.trials; ++t) {
        const TrialRecord& record =
            out.records[(static_cast<std::size_t>(s) * spec.trials + t) * num_schemes + k];
        ++row.records;
        if (record.status == "failed") {
          ++row.excluded;
          ++out.failed_records;
          continue;
        }
        c_sum += record.c_sum_mbps;
        alpha0 += record.alpha0;
        ++counted;
      }
      row.mean_c_sum_mbps = counted > 0 ? c_sum / counted : 0.0;
      row.mean_alpha0 = counted > 0 ? alpha0 / counted : 0.0;
      out.summary.push_back(row);
    }
  }
  return out;
}

double round9(double x) {
  return std::strtod(format9(x).c_str(), nullptr);
}

void emit_results(const std::vector<TrialRecord>& records, OutputFormat format,
                  const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_results: no records");
  const std::size_t m = records.front().alpha_m.size();
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw std::runtime_error("emit_results: cannot open '" + path + "' for writing");

  if (format == OutputFormat::csv) {
    file << "trial,seed,sweep,scheme,c_sum_mbps,alpha0";
    for (std::size_t i = 1; i <= m; ++i) file << ",alpha_m" << i;
    for (std::size_t i = 1; i <= m; ++i) file << ",c_fso_mbps" << i;
    for (std::size_t i = 1; i <= m; ++i) file << ",c_rf_mbps" << i;
    file << ",iters_gss,iters_aco,status,wall_ms\n";
    for (const TrialRecord& r : records) {
      file << r.trial << ',' << r.seed << ',' << format9(r.sweep_value) << ','
           << to_string(r.scheme) << ',' << format9(r.c_sum_mbps) << ',' << format9(r.alpha0);
      for (double v : r.alpha_m) file << ',' << format9(v);
      for (double v : r.c_fso_mbps) file << ',' << format9(v);
      for (double v : r.c_rf_mbps) file << ',' << format9(v);
      file << ',' << r.iters_gss << ',' << r.iters_aco << ',' << r.status << ','
           << format9(r.wall_ms) << '\n';
    }
  } else {
    nlohmann::json array = nlohmann::json::array();
    for (const TrialRecord& r : records) {
      nlohmann::json item;
      item["trial"] = r.trial;
      item["seed"] = r.seed;
      item["sweep"] = round9(r.sweep_value);
      item["scheme"] = to_string(r.scheme);
      item["c_sum_mbps"] = round9(r.c_sum_mbps);
      item["alpha0"] = round9(r.alpha0);
      nlohmann::json alpha = nlohmann::json::array();
      for (double v : r.alpha_m) alpha.push_back(round9(v));
      item["alpha_m"] = alpha;
      nlohmann::json fso = nlohmann::json::array();
      for (double v : r.c_fso_mbps) fso.push_back(round9(v));
      item["c_fso_mbps"] = fso;
      nlohmann::json rf = nlohmann::json::array();
      for (double v : r.c_rf_mbps) rf.push_back(round9(v));
      item["c_rf_mbps"] = rf;
      item["iters_gss"] = r.iters_gss;
      item["iters_aco"] = r.iters_aco;
      item["status"] = r.status;
      item["wall_ms"] = round9(r.wall_ms);
      array.push_back(item);
    }
    file << array.dump(2) << '\n';
  }
  if (!file.good()) throw std::runtime_error("emit_results: write to '" + path + "' failed");
}

void apply_config_file(const std::string& path, ExperimentSpec& spec) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::map<std::string, double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r");
      const auto last = s.find_last_not_of(" \t\r");
      return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
    };
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value_text = trim(stripped.substr(eq + 1));
    char* end = nullptr;
    const double value = std::strtod(value_text.c_str(), &end);
    if (value_text.empty() || end != value_text.c_str() + value_text.size()) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": cannot parse value for '" + key + "'");
    }
    values[key] = value;
  }

  // Defaults recoverable from the current spec (dB forms of linear fields).
  double n0_dbm_per_mhz = -114.0;
  double nf_db = 5.0;
  double p_k_dbm = 16.0;
  double p_bar_m_dbm = 33.0;
  double p_fso_dbm = 13.0;
  double omega_db = linear_to_db(spec.geometry.omega);
  double w_rf_mhz = spec.system.w_rf_hz / 1e6;
  double w_fso_mhz = spec.system.w_fso_hz / 1e6;
  double f_s_mhz = spec.system.sample_rate_hz / 1e6;

  const auto take = [&](const char* key, double& into) {
    auto it = values.find(key);
    if (it != values.end()) {
      into = it->second;
      values.erase(it);
    }
  };
  double num_mus = spec.system.num_mus;
  double num_rus = spec.system.num_rus;
  double ru_antennas = spec.system.ru_antennas;
  double cu_antennas = spec.system.cu_antennas;
  take("num_mus", num_mus);
  take("num_rus", num_rus);
  take("ru_antennas", ru_antennas);
  take("cu_antennas", cu_antennas);
  take("p_k_dbm", p_k_dbm);
  take("p_bar_m_dbm", p_bar_m_dbm);
  take("p_fso_dbm", p_fso_dbm);
  take("n0_dbm_per_mhz", n0_dbm_per_mhz);
  take("nf_db", nf_db);
  take("w_rf_mhz", w_rf_mhz);
  take("w_fso_mhz", w_fso_mhz);
  take("f_s_mhz", f_s_mhz);
  take("delta2_a2", spec.system.fso_noise_a2);
  take("d_ac_m", spec.geometry.d_ac);
  take("d_fr_m", spec.geometry.d_fr);
  take("d_ref_m", spec.geometry.d_ref);
  take("g_tx_mu_dbi", spec.geometry.g_tx_mu_dbi);
  take("g_rx_ru_dbi", spec.geometry.g_rx_ru_dbi);
  take("g_tx_ru_dbi", spec.geometry.g_tx_ru_dbi);
  take("g_rx_cu_dbi", spec.geometry.g_rx_cu_dbi);
  take("nu", spec.geometry.nu);
  take("omega_db", omega_db);
  take("gg_theta", spec.geometry.gg_shape_a);
  take("gg_phi", spec.geometry.gg_shape_b);
  take("kappa_db_per_m", spec.geometry.kappa_db_per_m);
  take("responsivity", spec.geometry.responsivity);

  double lambda_rf_mm = spec.geometry.lambda_rf * 1e3;
  double lambda_fso_nm = spec.geometry.lambda_fso * 1e9;
  double aperture_radius_cm = spec.geometry.aperture_radius * 1e2;
  double divergence_mrad = spec.geometry.divergence_half_angle * 1e3;
  take("lambda_rf_mm", lambda_rf_mm);
  take("lambda_fso_nm", lambda_fso_nm);
  take("aperture_radius_cm", aperture_radius_cm);
  take("divergence_mrad", divergence_mrad);

  if (!values.empty()) {
    throw std::invalid_argument("config: unknown key '" + values.begin()->first + "'");
  }

  spec.system.num_mus = static_cast<int>(num_mus);
  spec.system.num_rus = static_cast<int>(num_rus);
  spec.system.ru_antennas = static_cast<int>(ru_antennas);
  spec.system.cu_antennas = static_cast<int>(cu_antennas);
  spec.system.mu_power_w = Vector::Constant(spec.system.num_mus, dbm_to_watts(p_k_dbm));
  spec.system.ru_rf_power_w = Vector::Constant(spec.system.num_rus, dbm_to_watts(p_bar_m_dbm));
  spec.system.ru_fso_power_w = Vector::Constant(spec.system.num_rus, dbm_to_watts(p_fso_dbm));
  spec.system.w_rf_hz = w_rf_mhz * 1e6;
  spec.system.w_fso_hz = w_fso_mhz * 1e6;
  spec.system.sample_rate_hz = f_s_mhz * 1e6;
  spec.system.rf_noise_w =
      dbm_to_watts(n0_dbm_per_mhz + 10.0 * std::log10(w_rf_mhz) + nf_db);
  spec.geometry.omega = db_to_linear(omega_db);
  spec.geometry.lambda_rf = lambda_rf_mm * 1e-3;
  spec.geometry.lambda_fso = lambda_fso_nm * 1e-9;
  spec.geometry.aperture_radius = aperture_radius_cm * 1e-2;
  spec.geometry.divergence_half_angle = divergence_mrad * 1e-3;
}

void apply_paper_scale(ExperimentSpec& spec) {
  const double p_k = spec.system.mu_power_w.size() > 0 ? spec.system.mu_power_w(0)
                                                       : dbm_to_watts(16.0);
  spec.system.num_mus = 8;
  spec.system.ru_antennas = 8;
  spec.system.cu_antennas = 64;
  spec.system.mu_power_w = Vector::Constant(spec.system.num_mus, p_k);
  spec.trials = 1000;
}

}  // namespace cranopt
