#pragma once

// Deterministic sweep tables (CSV canonical, JSON optional) and the builders
// behind the figure subcommands: the N=3 initial-condition family, the
// boost-ratio maps, and the spectrally separated sinusoidal machine.

#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dicke/engine.hpp"

namespace dicke {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SweepTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  void add_meta(std::string key, double value) {
    metadata.emplace_back(std::move(key), format_double(value));
  }

  void write_csv(std::ostream& os) const {
    for (const auto& [k, v] : metadata) os << "# " << k << " = " << v << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << columns[c] << (c + 1 < columns.size() ? "," : "");
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        os << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
      os << '\n';
    }
  }

  void write_json(std::ostream& os) const {
    nlohmann::ordered_json j;
    j["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : metadata) j["metadata"][k] = v;
    j["columns"] = columns;
    j["rows"] = rows;
    os << j.dump(2) << '\n';
  }
};

struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int points = 2;
  bool log = false;

  std::vector<double> values() const {
    if (!(std::isfinite(min) && std::isfinite(max)) || !(min < max))
      throw config_error("SweepAxis: bounds must be finite and ordered");
    if (points < 2) throw config_error("SweepAxis: points must be >= 2");
    if (log && !(min > 0)) throw config_error("SweepAxis: log axis needs positive bounds");
    std::vector<double> out(points);
    const double lo = log ? std::log(min) : min;
    const double hi = log ? std::log(max) : max;
    for (int i = 0; i < points; ++i) {
      const double v = lo + (hi - lo) * i / (points - 1);
      out[i] = log ? std::exp(v) : v;
    }
    return out;
  }
};

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; results must be
/// written into preallocated slots so the output order stays deterministic.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = int(std::min<std::size_t>(jobs, n));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// --- figure builders -------------------------------------------------------

/// Power relative to one two-level atom for N=3 and initial spin-3/2
/// weights <Pi_1>; the remaining weight sits in the two doublets.
struct Fig3Options {
  std::vector<double> pi1 = {1.0, 0.8, 0.6, 0.5, 0.3, 0.0};
  SweepAxis axis{"x_eff", 1e-3, 10.0, 201, true};
  int jobs = 1;
};

inline SweepTable figure_fig3(const Fig3Options& opt = {}) {
  SweepTable t;
  t.add_meta("tool_version", kToolVersion);
  t.add_meta("figure", "fig3");
  t.add_meta("n_atoms", "3");
  for (double p : opt.pi1) t.add_meta("pi1", p);
  t.add_meta("independent_ref", 3.0);
  t.columns.push_back("x_eff");
  for (double p : opt.pi1) t.columns.push_back("ratio_pi1_" + format_double(p));
  t.columns.push_back("independent_ref");

  const auto xs = opt.axis.values();
  t.rows.resize(xs.size());
  parallel_for(xs.size(), opt.jobs, [&](std::size_t i) {
    const double x = xs[i];
    const double boost = amplification(SpinQuantumNumber{3}, x) /
                         amplification(SpinQuantumNumber{1}, x);
    std::vector<double> row{x};
    for (double p : opt.pi1) row.push_back(p * boost + (1.0 - p));
    row.push_back(3.0);
    t.rows[i] = std::move(row);
  });
  return t;
}

/// power_ratio over an (x_eff, N) grid.
struct Fig4Options {
  SweepAxis axis{"x_eff", 1e-2, 10.0, 61, true};
  int n_min = 1;
  int n_max = 100;
  int jobs = 1;
};

inline SweepTable figure_fig4(const Fig4Options& opt = {}) {
  if (opt.n_min < 1 || opt.n_min > opt.n_max)
    throw config_error("figure_fig4: need 1 <= n_min <= n_max");
  SweepTable t;
  t.add_meta("tool_version", kToolVersion);
  t.add_meta("figure", "fig4");
  t.add_meta("n_min", double(opt.n_min));
  t.add_meta("n_max", double(opt.n_max));
  t.columns = {"x_eff", "n_atoms", "power_ratio"};
  const auto xs = opt.axis.values();
  const int n_count = opt.n_max - opt.n_min + 1;
  t.rows.resize(xs.size() * n_count);
  parallel_for(xs.size(), opt.jobs, [&](std::size_t i) {
    for (int k = 0; k < n_count; ++k) {
      const int n = opt.n_min + k;
      t.rows[i * n_count + k] = {xs[i], double(n), power_ratio(n, xs[i])};
    }
  });
  return t;
}

/// Boost vs x_eff for a list of N plus the coth saturation curve.
struct Fig5Options {
  std::vector<int> n_list = {5, 10, 50, 100};
  SweepAxis axis{"x_eff", 1e-2, 10.0, 201, true};
  int jobs = 1;
};

inline SweepTable figure_fig5(const Fig5Options& opt = {}) {
  SweepTable t;
  t.add_meta("tool_version", kToolVersion);
  t.add_meta("figure", "fig5");
  for (int n : opt.n_list) t.add_meta("n_atoms", double(n));
  t.columns.push_back("x_eff");
  for (int n : opt.n_list) t.columns.push_back("boost_n" + std::to_string(n));
  t.columns.push_back("saturation");
  const auto xs = opt.axis.values();
  t.rows.resize(xs.size());
  parallel_for(xs.size(), opt.jobs, [&](std::size_t i) {
    std::vector<double> row{xs[i]};
    for (int n : opt.n_list) row.push_back(power_ratio(n, xs[i]));
    row.push_back(saturation_boost(xs[i]));
    t.rows[i] = std::move(row);
  });
  return t;
}

/// The spectrally separated sinusoidal machine of figs. 6 and 7: currents of
/// N individual vs N collective atoms against the hot-bath temperature.
struct SinMachineOptions {
  int n_atoms = 100;
  double omega0 = 1.0;
  double x_cold = 2.3;            // fig6 default; fig7 uses -ln(0.9)
  double drive_frequency = 0.3;   // Omega
  double g_ratio = 0.01;          // g / Omega
  double coupling_level = 1.0;    // G_c(omega0-Omega) = G_h(omega0+Omega)
  bool numeric_weights = false;   // false: small-depth P(0), P(+-1) form
  int q_max = 8;
  int grid_points = 4096;
  SweepAxis axis{"x_h", 1e-4, 3.0, 301, false};
  int jobs = 1;
};

inline MachineConfig sin_machine_config(const SinMachineOptions& opt, double x_hot) {
  MachineConfig config;
  config.n_atoms = opt.n_atoms;
  config.omega0 = opt.omega0;
  config.drive_frequency = opt.drive_frequency;
  config.modulation = ModulationSpec::sinusoidal(opt.omega0, opt.g_ratio * opt.drive_frequency,
                                                 opt.drive_frequency);
  config.weights = opt.numeric_weights
                       ? floquet_weights_numeric(config.modulation, opt.q_max, opt.grid_points)
                       : sinusoidal_weights_approx(opt.g_ratio * opt.drive_frequency,
                                                   opt.drive_frequency);
  config.cold = separated_bath(BathLabel::cold, opt.x_cold / opt.omega0, opt.coupling_level,
                               opt.omega0);
  config.hot = separated_bath(BathLabel::hot, x_hot / opt.omega0, opt.coupling_level, opt.omega0);
  return config;
}

inline SweepTable figure_sin_machine(const SinMachineOptions& opt, const std::string& name) {
  SweepTable t;
  t.add_meta("tool_version", kToolVersion);
  t.add_meta("figure", name);
  t.add_meta("n_atoms", double(opt.n_atoms));
  t.add_meta("omega0", opt.omega0);
  t.add_meta("x_cold", opt.x_cold);
  t.add_meta("Omega", opt.drive_frequency);
  t.add_meta("g_over_Omega", opt.g_ratio);
  t.add_meta("coupling_level", opt.coupling_level);
  t.add_meta("weights", opt.numeric_weights ? "numeric" : "eq19");
  t.add_meta("x_h_endpoint_note", "x_h sweeps start at " + format_double(opt.axis.min) +
                                      " standing in for the beta_h -> 0 limit");
  t.columns = {"x_h",        "x_eff",      "j_cold_ind", "j_hot_ind", "power_ind",
               "j_cold_coll", "j_hot_coll", "power_coll", "power_boost"};
  const auto xs = opt.axis.values();
  t.rows.resize(xs.size());
  parallel_for(xs.size(), opt.jobs, [&](std::size_t i) {
    const auto config = sin_machine_config(opt, xs[i]);
    const auto rates = machine_rates(config);
    const auto eff = effective_boltzmann(rates);
    const auto one = subspace_currents(SpinQuantumNumber{1}, rates, eff);
    const auto coll = subspace_currents(SpinQuantumNumber{config.n_atoms}, rates, eff);
    const double n = config.n_atoms;
    t.rows[i] = {xs[i],
                 eff.x_eff,
                 n * one.j_cold,
                 n * one.j_hot,
                 n * one.power,
                 coll.j_cold,
                 coll.j_hot,
                 coll.power,
                 power_ratio(config.n_atoms, eff.x_eff)};
  });
  return t;
}

inline SinMachineOptions fig6_defaults() { return {}; }

inline SinMachineOptions fig7_defaults() {
  SinMachineOptions opt;
  opt.x_cold = -std::log(0.9);
  opt.axis.max = 0.3;
  return opt;
}

inline SweepTable figure_fig6(const SinMachineOptions& opt = fig6_defaults()) {
  return figure_sin_machine(opt, "fig6");
}

inline SweepTable figure_fig7(const SinMachineOptions& opt = fig7_defaults()) {
  return figure_sin_machine(opt, "fig7");
}

}  // namespace dicke
