// Command-line front end: decompositions, Floquet weights, closed-form
// thermodynamics, figure data files, and the oracle comparison suites.
//
// Exit codes: 0 success, 2 invalid configuration, 3 convergence failure,
// 4 verification failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dicke/lindblad.hpp"
#include "dicke/sweep.hpp"

using namespace dicke;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitVerification = 4;

struct OutputOptions {
  std::string path;          // empty = stdout
  std::string format = "csv";
};

void write_table(const SweepTable& table, const OutputOptions& out) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.path.empty()) {
    file.open(out.path);
    if (!file) throw config_error("cannot open output file " + out.path);
    os = &file;
  }
  if (out.format == "csv")
    table.write_csv(*os);
  else
    table.write_json(*os);
}

std::vector<std::pair<double, double>> load_two_column_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw config_error("cannot open " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream is(line);
    double a = 0.0, b = 0.0;
    if (is >> a >> b) rows.emplace_back(a, b);
  }
  if (rows.size() < 2) throw config_error("file " + path + " has fewer than two data rows");
  return rows;
}

SpinQuantumNumber parse_spin(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return SpinQuantumNumber{2 * std::stoi(text)};
  if (text.substr(slash + 1) != "2") throw config_error("bad spin label " + text);
  return SpinQuantumNumber{std::stoi(text.substr(0, slash))};
}

// ---- machine configuration: defaults <- JSON file <- flags ---------------

struct MachineFlags {
  std::string config_path;
  std::optional<int> n_atoms;
  std::optional<double> omega0, drive, depth, x_cold, x_hot;
  std::optional<int> q_max, grid_points;
  std::optional<double> weight_tol;
  std::optional<std::string> weights_mode;
};

ordered_json default_machine_json() {
  return ordered_json{
      {"n_atoms", 1},
      {"omega0", 1.0},
      {"Omega", 0.3},
      {"modulation", {{"form", "sinusoidal"}, {"g", 0.003}}},
      {"weights",
       {{"mode", "numeric"}, {"q_max", 8}, {"grid_points", 4096}, {"residual_tol", 1e-10}}},
      {"baths",
       {{"cold", {{"x", 2.3}, {"model", {{"type", "separated"}, {"level", 1.0}}}}},
        {"hot", {{"x", 0.2}, {"model", {{"type", "separated"}, {"level", 1.0}}}}}}},
      {"subspace_weights", ordered_json::object()},
  };
}

void merge_json(ordered_json& base, const ordered_json& overlay) {
  for (const auto& [key, value] : overlay.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object())
      merge_json(base[key], value);
    else
      base[key] = value;
  }
}

ordered_json resolve_machine_json(const MachineFlags& flags) {
  ordered_json config = default_machine_json();
  if (!flags.config_path.empty()) {
    std::ifstream file(flags.config_path);
    if (!file) throw config_error("cannot open config file " + flags.config_path);
    ordered_json from_file;
    try {
      file >> from_file;
    } catch (const nlohmann::json::exception& e) {
      throw config_error("config file " + flags.config_path + ": " + e.what());
    }
    merge_json(config, from_file);
  }
  if (flags.n_atoms) config["n_atoms"] = *flags.n_atoms;
  if (flags.omega0) config["omega0"] = *flags.omega0;
  if (flags.drive) config["Omega"] = *flags.drive;
  if (flags.depth) config["modulation"]["g"] = *flags.depth;
  if (flags.x_cold) config["baths"]["cold"]["x"] = *flags.x_cold;
  if (flags.x_hot) config["baths"]["hot"]["x"] = *flags.x_hot;
  if (flags.q_max) config["weights"]["q_max"] = *flags.q_max;
  if (flags.grid_points) config["weights"]["grid_points"] = *flags.grid_points;
  if (flags.weight_tol) config["weights"]["residual_tol"] = *flags.weight_tol;
  if (flags.weights_mode) config["weights"]["mode"] = *flags.weights_mode;
  return config;
}

BathSpec bath_from_json(BathLabel label, const ordered_json& j, double omega0) {
  double beta = 0.0;
  if (j.contains("x"))
    beta = j.at("x").get<double>() / omega0;
  else if (j.contains("beta"))
    beta = j.at("beta").get<double>();
  else
    throw config_error("bath needs an 'x' or 'beta' entry");

  const auto& model = j.at("model");
  const std::string type = model.at("type").get<std::string>();
  if (type == "flat") {
    FlatSpectrum flat;
    flat.gamma0 = model.value("gamma0", 1.0);
    flat.omega_min = model.value("omega_min", 0.0);
    flat.omega_max = model.value("omega_max", std::numeric_limits<double>::infinity());
    return {label, beta, flat};
  }
  if (type == "separated")
    return {label, beta, SeparatedSpectrum{model.value("level", 1.0), omega0}};
  if (type == "tabulated") {
    TabulatedSpectrum tab;
    for (const auto& [omega, g] : load_two_column_csv(model.at("file").get<std::string>())) {
      tab.omega.push_back(omega);
      tab.value.push_back(g);
    }
    return {label, beta, tab};
  }
  throw config_error("unknown bath model type '" + type + "'");
}

MachineConfig machine_from_json(const ordered_json& j) {
  MachineConfig config;
  config.n_atoms = j.at("n_atoms").get<int>();
  config.omega0 = j.at("omega0").get<double>();
  config.drive_frequency = j.at("Omega").get<double>();

  const auto& mod = j.at("modulation");
  const std::string form = mod.at("form").get<std::string>();
  if (form == "constant") {
    config.modulation = ModulationSpec::constant(config.omega0);
  } else if (form == "sinusoidal") {
    config.modulation = ModulationSpec::sinusoidal(config.omega0, mod.at("g").get<double>(),
                                                   config.drive_frequency);
  } else if (form == "tabulated") {
    std::vector<double> t, omega;
    for (const auto& [a, b] : load_two_column_csv(mod.at("file").get<std::string>())) {
      t.push_back(a);
      omega.push_back(b);
    }
    config.modulation = ModulationSpec::tabulated(config.omega0, t, omega);
  } else {
    throw config_error("unknown modulation form '" + form + "'");
  }

  const auto& weights = j.at("weights");
  const std::string mode = weights.at("mode").get<std::string>();
  if (mode == "numeric") {
    config.weights = floquet_weights_numeric(config.modulation, weights.at("q_max").get<int>(),
                                             weights.at("grid_points").get<int>(),
                                             weights.at("residual_tol").get<double>());
  } else if (mode == "eq19") {
    const auto* sin = std::get_if<SinusoidalModulation>(&config.modulation.form);
    if (!sin) throw config_error("eq19 weights need a sinusoidal modulation");
    config.weights = sinusoidal_weights_approx(sin->depth, sin->drive_frequency);
  } else {
    throw config_error("unknown weights mode '" + mode + "'");
  }

  config.cold = bath_from_json(BathLabel::cold, j.at("baths").at("cold"), config.omega0);
  config.hot = bath_from_json(BathLabel::hot, j.at("baths").at("hot"), config.omega0);

  for (const auto& [key, value] : j.at("subspace_weights").items())
    config.subspace_weights[parse_spin(key)] = value.get<double>();
  return config;
}

void echo_config(SweepTable& table, const ordered_json& config, const std::string& prefix = "config") {
  for (const auto& [key, value] : config.items()) {
    const std::string name = prefix + "." + key;
    if (value.is_object())
      echo_config(table, value, name);
    else
      table.add_meta(name, value.is_string() ? value.get<std::string>() : value.dump());
  }
}

void warn_about_modulation(const MachineConfig& config) {
  if (const auto warning = modulation_warning(config.modulation))
    std::cerr << "warning: " << *warning << '\n';
}

Matrix initial_state_from_spec(const std::string& spec, int n_atoms) {
  const Eigen::Index dim = Eigen::Index(1) << n_atoms;
  const auto pure = [](const Vector& v) { return Matrix(v * v.adjoint()); };
  if (spec == "excited") return pure(symmetric_state(n_atoms, n_atoms));
  if (spec == "ground") return pure(symmetric_state(n_atoms, 0));
  if (spec == "mixed") return Matrix::Identity(dim, dim) / double(dim);
  if (spec == "singlet") {
    if (n_atoms != 2) throw config_error("singlet initial state needs n_atoms = 2");
    Vector v = Vector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return pure(v);
  }
  if (spec.rfind("symmetric:", 0) == 0)
    return pure(symmetric_state(n_atoms, std::stoi(spec.substr(10))));
  if (spec.rfind("product:", 0) == 0) {
    const std::string bits = spec.substr(8);
    if (int(bits.size()) != n_atoms)
      throw config_error("product state needs one letter (e/g) per atom");
    Eigen::Index index = 0;
    for (char c : bits) {
      index <<= 1;
      if (c == 'e')
        index |= 1;
      else if (c != 'g')
        throw config_error("product state letters must be e or g");
    }
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return pure(v);
  }
  throw config_error("unknown initial state '" + spec + "'");
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ---- subcommand bodies ----------------------------------------------------

int run_decompose(int n_atoms, const OutputOptions& out) {
  const auto dec = decompose(n_atoms);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.path.empty()) {
    file.open(out.path);
    if (!file) throw config_error("cannot open output file " + out.path);
    os = &file;
  }
  if (out.format == "csv") {
    *os << "# tool_version = " << kToolVersion << '\n';
    *os << "# n_atoms = " << n_atoms << '\n';
    *os << "# total_dimension = " << dec.total_dimension().str() << '\n';
    *os << "j,multiplicity,dimension\n";
    for (const auto& s : dec.sectors)
      *os << to_string(s.j) << ',' << s.multiplicity.str() << ',' << s.j.dimension() << '\n';
  } else {
    ordered_json j;
    j["metadata"] = {{"tool_version", kToolVersion},
                     {"n_atoms", n_atoms},
                     {"total_dimension", dec.total_dimension().str()}};
    j["sectors"] = ordered_json::array();
    for (const auto& s : dec.sectors)
      j["sectors"].push_back({{"j", to_string(s.j)},
                              {"multiplicity", s.multiplicity.str()},
                              {"dimension", s.j.dimension()}});
    *os << j.dump(2) << '\n';
  }
  return kExitOk;
}

int run_pq_weights(const MachineFlags& flags, bool print_config, const OutputOptions& out) {
  const auto config_json = resolve_machine_json(flags);
  if (print_config) {
    std::cout << config_json.dump(2) << '\n';
    return kExitOk;
  }
  const auto config = machine_from_json(config_json);
  warn_about_modulation(config);
  SweepTable table;
  table.add_meta("tool_version", kToolVersion);
  echo_config(table, config_json);
  table.add_meta("residual", config.weights.residual);
  table.add_meta("approximation_warning", config.weights.approximation_warning ? "true" : "false");
  table.columns = {"q", "P", "omega"};
  for (const auto& [q, p] : config.weights.weights)
    table.rows.push_back({double(q), p, config.omega0 + q * config.drive_frequency});
  write_table(table, out);
  return kExitOk;
}

int run_beta_eff(const MachineFlags& flags, bool print_config, const OutputOptions& out) {
  const auto config_json = resolve_machine_json(flags);
  if (print_config) {
    std::cout << config_json.dump(2) << '\n';
    return kExitOk;
  }
  const auto config = machine_from_json(config_json);
  warn_about_modulation(config);
  const auto eff = effective_boltzmann(config);
  SweepTable table;
  table.add_meta("tool_version", kToolVersion);
  echo_config(table, config_json);
  table.columns = {"boltzmann_factor", "x_eff"};
  table.rows.push_back({eff.boltzmann_factor, eff.x_eff});
  write_table(table, out);
  return kExitOk;
}

int run_currents(const MachineFlags& flags, bool print_config, const OutputOptions& out) {
  const auto config_json = resolve_machine_json(flags);
  if (print_config) {
    std::cout << config_json.dump(2) << '\n';
    return kExitOk;
  }
  const auto config = machine_from_json(config_json);
  warn_about_modulation(config);
  const auto eff = effective_boltzmann(config);
  const auto currents = total_currents(config);
  SweepTable table;
  table.add_meta("tool_version", kToolVersion);
  echo_config(table, config_json);
  table.add_meta("mode", to_string(currents.mode));
  table.add_meta("efficiency_note", "efficiency is nan outside engine mode");
  table.columns = {"x_eff", "j_cold", "j_hot", "power", "efficiency"};
  table.rows.push_back({eff.x_eff, currents.j_cold, currents.j_hot, currents.power,
                        currents.efficiency.value_or(std::nan(""))});
  write_table(table, out);
  return kExitOk;
}

int run_boost(int n_atoms, const SweepAxis& axis, int jobs, const OutputOptions& out) {
  SweepTable table;
  table.add_meta("tool_version", kToolVersion);
  table.add_meta("n_atoms", double(n_atoms));
  table.add_meta("high_temperature_limit", boost_limits(n_atoms).second);
  table.columns = {"x_eff", "power_ratio", "saturation"};
  const auto xs = axis.values();
  table.rows.resize(xs.size());
  parallel_for(xs.size(), jobs, [&](std::size_t i) {
    table.rows[i] = {xs[i], power_ratio(n_atoms, xs[i]), saturation_boost(xs[i])};
  });
  write_table(table, out);
  return kExitOk;
}

int run_oracle_compare(const MachineFlags& flags, const std::string& rho0_spec, double tol,
                       bool print_config, const OutputOptions& out) {
  auto config_json = resolve_machine_json(flags);
  config_json["rho0"] = rho0_spec;
  config_json["verify_tol"] = tol;
  if (print_config) {
    std::cout << config_json.dump(2) << '\n';
    return kExitOk;
  }
  auto config = machine_from_json(config_json);
  warn_about_modulation(config);
  const int n = config.n_atoms;
  if (n > kDefaultOracleMax)
    throw resource_limit_error("oracle-compare: n_atoms exceeds oracle_max");

  const Matrix rho0 = initial_state_from_spec(rho0_spec, n);
  config.subspace_weights = subspace_weights(rho0, n);
  const auto closed = total_currents(config);

  const auto rates = machine_rates(config);
  const auto channels = build_machine_channels(FullCollective{n}, rates);
  const auto oracle = run_oracle(rho0, channels, collective_operator(n, Axis::z),
                                 {.tolerance = 1e-12});

  SweepTable table;
  table.add_meta("tool_version", kToolVersion);
  echo_config(table, config_json);
  table.add_meta("oracle_steps", double(oracle.steps));
  table.add_meta("oracle_residual", oracle.final_residual);
  table.columns = {"closed", "oracle", "rel_err"};
  bool pass = true;
  const double dark_floor = 1e-10;
  for (auto [closed_value, oracle_value] :
       {std::pair{closed.j_cold, oracle.currents->j_cold},
        std::pair{closed.j_hot, oracle.currents->j_hot},
        std::pair{closed.power, oracle.currents->power}}) {
    const double err = relative_gap(closed_value, oracle_value);
    table.rows.push_back({closed_value, oracle_value, err});
    const bool dark = std::max(std::abs(closed_value), std::abs(oracle_value)) <= dark_floor;
    if (!dark && err > tol) pass = false;
  }
  table.add_meta("verdict", pass ? "pass" : "fail");
  write_table(table, out);
  return pass ? kExitOk : kExitVerification;
}

int run_dephasing(const MachineFlags& flags, double gamma_d, const std::string& rho0_spec,
                  double tol, bool print_config, const OutputOptions& out) {
  auto config_json = resolve_machine_json(flags);
  config_json["gamma_d"] = gamma_d < 0 ? "auto" : ordered_json(gamma_d);
  config_json["rho0"] = rho0_spec;
  config_json["verify_tol"] = tol;
  if (print_config) {
    std::cout << config_json.dump(2) << '\n';
    return kExitOk;
  }
  const auto config = machine_from_json(config_json);
  warn_about_modulation(config);
  const int n = config.n_atoms;
  if (n > kDefaultOracleMax)
    throw resource_limit_error("dephasing: n_atoms exceeds oracle_max");

  const auto rates = machine_rates(config);
  if (gamma_d < 0) {
    // auto: strong enough to scramble the symmetry, weak enough to keep the
    // integration non-stiff against the bath rates
    double max_emission = 0.0;
    for (const auto& c : rates.channels) max_emission = std::max(max_emission, c.emission);
    gamma_d = 10.0 * max_emission;
  }
  const auto eff = effective_boltzmann(rates);
  const auto single = subspace_currents(SpinQuantumNumber{1}, rates, eff);
  const Matrix rho0 = initial_state_from_spec(rho0_spec, n);

  SweepTable table;
  table.add_meta("tool_version", kToolVersion);
  echo_config(table, config_json);
  table.add_meta("gamma_d_resolved", gamma_d);
  table.columns = {"n_x_single", "observed", "rel_err"};

  if (gamma_d > 0) {
    const auto dephased = dephasing_currents(n, rates, gamma_d, rho0, {.tolerance = 1e-12});
    bool pass = true;
    for (auto [expected, observed] : {std::pair{n * single.j_cold, dephased.j_cold},
                                      std::pair{n * single.j_hot, dephased.j_hot},
                                      std::pair{n * single.power, dephased.power}}) {
      const double err = relative_gap(expected, observed);
      table.rows.push_back({expected, observed, err});
      if (err > tol) pass = false;
    }
    table.add_meta("verdict", pass ? "pass" : "fail");
    write_table(table, out);
    return pass ? kExitOk : kExitVerification;
  }

  // gamma_d = 0: no collapse; report the collective boost instead
  const auto channels = build_machine_channels(FullCollective{n}, rates);
  const auto oracle = run_oracle(rho0, channels, collective_operator(n, Axis::z),
                                 {.tolerance = 1e-12});
  table.add_meta("verdict", "collective");
  table.add_meta("boost_expected", power_ratio(n, eff.x_eff));
  for (auto [expected, observed] : {std::pair{n * single.j_cold, oracle.currents->j_cold},
                                    std::pair{n * single.j_hot, oracle.currents->j_hot},
                                    std::pair{n * single.power, oracle.currents->power}}) {
    table.rows.push_back({expected, observed, observed / expected});
  }
  write_table(table, out);
  return kExitOk;
}

int run_transient(int n_atoms, double rate, double dt, double t_max, const OutputOptions& out) {
  const auto series = superradiant_transient(n_atoms, rate, dt, t_max);
  SweepTable table;
  table.add_meta("tool_version", kToolVersion);
  table.add_meta("n_atoms", double(n_atoms));
  table.add_meta("decay_rate", rate);
  table.add_meta("initial_state", "all atoms excited");
  table.add_meta("bath", "zero occupation");
  table.columns = {"t", "jz", "emission_rate", "residual"};
  for (std::size_t i = 0; i < series.time.size(); ++i)
    table.rows.push_back(
        {series.time[i], series.jz[i], series.emission_rate[i], series.residual[i]});
  write_table(table, out);
  return kExitOk;
}

void add_machine_flags(CLI::App* cmd, MachineFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON configuration file");
  cmd->add_option("--n", flags.n_atoms, "number of atoms");
  cmd->add_option("--omega0", flags.omega0, "bare transition frequency");
  cmd->add_option("--Omega", flags.drive, "drive frequency");
  cmd->add_option("--g", flags.depth, "modulation depth");
  cmd->add_option("--x-c", flags.x_cold, "cold bath beta * omega0");
  cmd->add_option("--x-h", flags.x_hot, "hot bath beta * omega0");
  cmd->add_option("--q-max", flags.q_max, "sideband cutoff");
  cmd->add_option("--grid", flags.grid_points, "quadrature grid points");
  cmd->add_option("--tol", flags.weight_tol, "weight truncation tolerance");
  cmd->add_option("--weights", flags.weights_mode, "weights mode: numeric or eq19")
      ->check(CLI::IsMember({"numeric", "eq19"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state thermodynamics of collectively coupled modulated atoms"};
  app.set_version_flag("--version", std::string("dicke ") + kToolVersion);
  app.require_subcommand(1);

  OutputOptions out;
  app.add_option("--output", out.path, "output file (default stdout)")->configurable(false);
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->configurable(false);
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

  int exit_code = kExitOk;

  // decompose
  auto* decompose_cmd = app.add_subcommand("decompose", "irreducible spin sectors of N atoms");
  int decompose_n = 1;
  decompose_cmd->add_option("n", decompose_n, "number of atoms")->required();
  decompose_cmd->callback([&] { exit_code = run_decompose(decompose_n, out); });

  // pq-weights
  auto* pq_cmd = app.add_subcommand("pq-weights", "Floquet sideband weights P(q)");
  MachineFlags pq_flags;
  add_machine_flags(pq_cmd, pq_flags);
  pq_cmd->callback([&] { exit_code = run_pq_weights(pq_flags, print_config, out); });

  // beta-eff
  auto* beta_cmd = app.add_subcommand("beta-eff", "effective inverse temperature");
  MachineFlags beta_flags;
  add_machine_flags(beta_cmd, beta_flags);
  beta_cmd->callback([&] { exit_code = run_beta_eff(beta_flags, print_config, out); });

  // currents
  auto* currents_cmd = app.add_subcommand("currents", "steady-state energy currents");
  MachineFlags currents_flags;
  add_machine_flags(currents_cmd, currents_flags);
  currents_cmd->callback([&] { exit_code = run_currents(currents_flags, print_config, out); });

  // boost
  auto* boost_cmd = app.add_subcommand("boost", "collective power boost over x_eff");
  int boost_n = 100;
  SweepAxis boost_axis{"x_eff", 1e-2, 10.0, 101, true};
  boost_cmd->add_option("--n", boost_n, "number of atoms");
  boost_cmd->add_option("--min", boost_axis.min, "x_eff lower bound");
  boost_cmd->add_option("--max", boost_axis.max, "x_eff upper bound");
  boost_cmd->add_option("--points", boost_axis.points, "sweep points");
  boost_cmd->add_flag("--linear", [&boost_axis](std::int64_t) { boost_axis.log = false; },
                      "linear instead of log spacing");
  boost_cmd->callback([&] { exit_code = run_boost(boost_n, boost_axis, jobs, out); });

  // figure
  auto* figure_cmd = app.add_subcommand("figure", "reproduce a figure as a data table");
  std::string which_figure;
  figure_cmd->add_option("which", which_figure, "fig3, fig4, fig5, fig6 or fig7")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "fig7"}));
  std::optional<double> fig_min, fig_max, fig_x_cold, fig_g_ratio, fig_level;
  std::optional<int> fig_points, fig_n;
  bool fig_numeric_weights = false;
  figure_cmd->add_option("--min", fig_min, "axis lower bound");
  figure_cmd->add_option("--max", fig_max, "axis upper bound");
  figure_cmd->add_option("--points", fig_points, "axis points");
  figure_cmd->add_option("--n", fig_n, "number of atoms (fig6/fig7)");
  figure_cmd->add_option("--x-c", fig_x_cold, "cold bath x (fig6/fig7)");
  figure_cmd->add_option("--g-ratio", fig_g_ratio, "g / Omega (fig6/fig7)");
  figure_cmd->add_option("--level", fig_level, "sideband coupling level (fig6/fig7)");
  figure_cmd->add_flag("--numeric-weights", fig_numeric_weights,
                       "use the quadrature weights instead of the small-depth form");
  figure_cmd->callback([&] {
    SweepTable table;
    if (which_figure == "fig3") {
      Fig3Options opt;
      opt.jobs = jobs;
      if (fig_min) opt.axis.min = *fig_min;
      if (fig_max) opt.axis.max = *fig_max;
      if (fig_points) opt.axis.points = *fig_points;
      table = figure_fig3(opt);
    } else if (which_figure == "fig4") {
      Fig4Options opt;
      opt.jobs = jobs;
      if (fig_min) opt.axis.min = *fig_min;
      if (fig_max) opt.axis.max = *fig_max;
      if (fig_points) opt.axis.points = *fig_points;
      if (fig_n) opt.n_max = *fig_n;
      table = figure_fig4(opt);
    } else if (which_figure == "fig5") {
      Fig5Options opt;
      opt.jobs = jobs;
      if (fig_min) opt.axis.min = *fig_min;
      if (fig_max) opt.axis.max = *fig_max;
      if (fig_points) opt.axis.points = *fig_points;
      table = figure_fig5(opt);
    } else {
      SinMachineOptions opt = which_figure == "fig6" ? fig6_defaults() : fig7_defaults();
      opt.jobs = jobs;
      if (fig_min) opt.axis.min = *fig_min;
      if (fig_max) opt.axis.max = *fig_max;
      if (fig_points) opt.axis.points = *fig_points;
      if (fig_n) opt.n_atoms = *fig_n;
      if (fig_x_cold) opt.x_cold = *fig_x_cold;
      if (fig_g_ratio) opt.g_ratio = *fig_g_ratio;
      if (fig_level) opt.coupling_level = *fig_level;
      opt.numeric_weights = fig_numeric_weights;
      table = figure_sin_machine(opt, which_figure);
    }
    write_table(table, out);
    exit_code = kExitOk;
  });

  // oracle-compare
  auto* oracle_cmd =
      app.add_subcommand("oracle-compare", "brute-force Lindblad vs closed-form currents");
  MachineFlags oracle_flags;
  add_machine_flags(oracle_cmd, oracle_flags);
  std::string oracle_rho0 = "excited";
  double oracle_tol = 1e-5;
  oracle_cmd->add_option("--rho0", oracle_rho0,
                         "initial state: excited, ground, mixed, singlet, symmetric:k, "
                         "product:egg...");
  oracle_cmd->add_option("--verify-tol", oracle_tol, "maximum relative error");
  oracle_cmd->callback([&] {
    exit_code = run_oracle_compare(oracle_flags, oracle_rho0, oracle_tol, print_config, out);
  });

  // dephasing
  auto* dephasing_cmd =
      app.add_subcommand("dephasing", "dephased collective machine vs N independent atoms");
  MachineFlags dephasing_flags;
  add_machine_flags(dephasing_cmd, dephasing_flags);
  double gamma_d = -1.0;
  std::string dephasing_rho0 = "excited";
  double dephasing_tol = 1e-5;
  dephasing_cmd->add_option("--gamma-d", gamma_d,
                            "dephasing rate; negative = auto-scale, 0 reports the boost");
  dephasing_cmd->add_option("--rho0", dephasing_rho0, "initial state");
  dephasing_cmd->add_option("--verify-tol", dephasing_tol, "maximum relative error");
  dephasing_cmd->callback([&] {
    exit_code = run_dephasing(dephasing_flags, gamma_d, dephasing_rho0, dephasing_tol,
                              print_config, out);
  });

  // transient
  auto* transient_cmd =
      app.add_subcommand("transient", "superradiant decay of the inverted ensemble");
  int transient_n = 6;
  double transient_rate = 0.5, transient_dt = 0.0, transient_tmax = 0.0;
  transient_cmd->add_option("--n", transient_n, "number of atoms");
  transient_cmd->add_option("--rate", transient_rate, "collective decay rate");
  transient_cmd->add_option("--dt", transient_dt, "time step (0 = auto)");
  transient_cmd->add_option("--t-max", transient_tmax, "final time (0 = auto)");
  transient_cmd->callback(
      [&] { exit_code = run_transient(transient_n, transient_rate, transient_dt, transient_tmax, out); });

  // allow the global output/jobs flags after the subcommand name
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const instability_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  return exit_code;
}
