#pragma once

// Closed-form steady-state thermodynamics of the collectively coupled,
// periodically modulated machine: effective temperature, amplification
// factor F(j), heat currents, power, efficiency, boost ratios and limits.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>

#include "dicke/baths.hpp"
#include "dicke/spin_algebra.hpp"

namespace dicke {

struct EffectiveTemperature {
  double boltzmann_factor = 0.0;  // exp(-x_eff)
  double x_eff = 0.0;             // beta_eff * omega0
};

/// Global detailed balance: total absorption rate over total emission rate,
/// summed over every active (bath, sideband) channel.
inline EffectiveTemperature effective_boltzmann(const SidebandRates& rates) {
  double emission = 0.0, absorption = 0.0;
  for (const auto& c : rates.channels) {
    emission += c.emission;
    absorption += c.absorption;
  }
  if (emission <= 0.0)
    throw no_coupling_error("effective_boltzmann: no active channel couples the atoms");
  const double factor = absorption / emission;
  return {factor, -std::log(factor)};
}

/// Amplification factor of the spin-j working medium,
///   F(j) = sum_{p=0}^{2j-1} e^{-p x} (p+1)(2j-p) / sum_{p=0}^{2j} e^{-p x},
/// the thermally weighted squared Clebsch-Gordan ladder elements. F(0) = 0.
inline double amplification(SpinQuantumNumber j, double x_eff) {
  if (x_eff < 0) throw std::invalid_argument("amplification: x_eff must be >= 0");
  const int n = j.twice_j;
  double num = 0.0, den = 1.0;  // p = 0 term of the denominator
  for (int p = 0; p < n; ++p) {
    const double w = std::exp(-p * x_eff);
    num += w * double(p + 1) * double(n - p);
    den += std::exp(-(p + 1) * x_eff);
  }
  return n == 0 ? 0.0 : num / den;
}

enum class MachineMode { engine, refrigerator, heat_distributor, idle };

inline const char* to_string(MachineMode m) {
  switch (m) {
    case MachineMode::engine: return "engine";
    case MachineMode::refrigerator: return "refrigerator";
    case MachineMode::heat_distributor: return "heat_distributor";
    case MachineMode::idle: return "idle";
  }
  return "?";
}

/// Steady-state energy currents, sign convention: currents flowing towards
/// the atoms are positive; engine operation has power < 0.
struct EnergyCurrents {
  double j_cold = 0.0;
  double j_hot = 0.0;
  double power = 0.0;  // -(j_cold + j_hot)
  MachineMode mode = MachineMode::idle;
  std::optional<double> efficiency;  // -power/j_hot, engine mode only
};

inline MachineMode classify_mode(double j_cold, double j_hot, double power,
                                 double scale_epsilon = 1e-12) {
  if (!(scale_epsilon > 0)) throw std::invalid_argument("classify_mode: epsilon must be positive");
  const double scale = std::max({std::abs(j_cold), std::abs(j_hot), std::abs(power),
                                 std::numeric_limits<double>::min()});
  const double eps = scale_epsilon * scale;
  if (power < -eps && j_hot > eps && j_cold < -eps) return MachineMode::engine;
  if (power > eps && j_cold > eps && j_hot < -eps) return MachineMode::refrigerator;
  if (power > eps && j_cold < -eps && j_hot < -eps) return MachineMode::heat_distributor;
  return MachineMode::idle;
}

inline MachineMode classify_mode(const EnergyCurrents& c, double scale_epsilon = 1e-12) {
  return classify_mode(c.j_cold, c.j_hot, c.power, scale_epsilon);
}

inline std::optional<double> engine_efficiency(const EnergyCurrents& c) {
  if (c.mode != MachineMode::engine || c.j_hot == 0.0) return std::nullopt;
  return -c.power / c.j_hot;
}

/// Fills the derived fields (power by energy conservation, mode, efficiency).
inline EnergyCurrents assemble_currents(double j_cold, double j_hot,
                                        double scale_epsilon = 1e-12) {
  EnergyCurrents out;
  out.j_cold = j_cold;
  out.j_hot = j_hot;
  out.power = -(j_cold + j_hot);
  out.mode = classify_mode(out, scale_epsilon);
  out.efficiency = engine_efficiency(out);
  return out;
}

/// Currents of a single spin-j working medium,
///   J_i(j) = F(j) sum_q (omega0 + q Omega) P(q) G_i [e^{-beta_i omega_q} - e^{-x_eff}].
inline EnergyCurrents subspace_currents(SpinQuantumNumber j, const SidebandRates& rates,
                                        const EffectiveTemperature& eff) {
  const double f = amplification(j, eff.x_eff);
  double j_cold = 0.0, j_hot = 0.0;
  for (const auto& c : rates.channels) {
    // P(q) G_i = 2 * emission, e^{-beta_i omega} * P G = 2 * absorption.
    const double flow = 2.0 * c.omega * (c.absorption - c.emission * eff.boltzmann_factor);
    (c.bath == BathLabel::cold ? j_cold : j_hot) += flow;
  }
  return assemble_currents(f * j_cold, f * j_hot);
}

struct MachineConfig {
  int n_atoms = 1;
  double omega0 = 1.0;
  double drive_frequency = 0.0;  // Omega
  ModulationSpec modulation = ModulationSpec::constant();
  BathSpec cold = flat_bath(BathLabel::cold, 1.0);
  BathSpec hot = flat_bath(BathLabel::hot, 1.0);
  FloquetWeights weights{{{0, 1.0}}, 0, 0.0, false};
  /// j -> <Pi_j> summed over multiplicity; empty means {N/2: 1}.
  std::map<SpinQuantumNumber, double> subspace_weights;
};

inline SidebandRates machine_rates(const MachineConfig& config) {
  return sideband_rates(config.cold, config.hot, config.weights, config.omega0,
                        config.drive_frequency);
}

inline EffectiveTemperature effective_boltzmann(const MachineConfig& config) {
  return effective_boltzmann(machine_rates(config));
}

inline EnergyCurrents subspace_currents(SpinQuantumNumber j, const MachineConfig& config,
                                        const EffectiveTemperature& eff) {
  return subspace_currents(j, machine_rates(config), eff);
}

inline std::map<SpinQuantumNumber, double> resolve_subspace_weights(const MachineConfig& config) {
  if (config.n_atoms < 1) throw config_error("MachineConfig: n_atoms must be positive");
  if (config.subspace_weights.empty())
    return {{SpinQuantumNumber{config.n_atoms}, 1.0}};
  double sum = 0.0;
  for (const auto& [j, w] : config.subspace_weights) {
    if (!sector_exists(config.n_atoms, j))
      throw config_error("MachineConfig: subspace j=" + to_string(j) + " not in decompose(" +
                         std::to_string(config.n_atoms) + ")");
    if (w < -1e-10) throw config_error("MachineConfig: subspace weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw config_error("MachineConfig: subspace weights must sum to 1");
  return config.subspace_weights;
}

/// Initial-condition weighted total currents, sum_j <Pi_j> J_i(j).
inline EnergyCurrents total_currents(const MachineConfig& config) {
  const auto weights = resolve_subspace_weights(config);
  const auto rates = machine_rates(config);
  const auto eff = effective_boltzmann(rates);
  double j_cold = 0.0, j_hot = 0.0;
  for (const auto& [j, w] : weights) {
    const auto part = subspace_currents(j, rates, eff);
    j_cold += w * part.j_cold;
    j_hot += w * part.j_hot;
  }
  return assemble_currents(j_cold, j_hot);
}

/// Collective-over-individual boost, (1/N) F(N/2) / F(1/2); the same ratio
/// applies to both heat currents and the power.
inline double power_ratio(int n_atoms, double x_eff) {
  if (n_atoms < 1) throw std::invalid_argument("power_ratio: n_atoms must be positive");
  return amplification(SpinQuantumNumber{n_atoms}, x_eff) /
         (n_atoms * amplification(SpinQuantumNumber{1}, x_eff));
}

/// Limits of power_ratio in x_eff: 1 (low temperature) and (N+2)/3 (high).
inline std::pair<double, double> boost_limits(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("boost_limits: n_atoms must be positive");
  return {1.0, (n_atoms + 2) / 3.0};
}

/// N -> infinity saturation of power_ratio, coth(x_eff/2); diverges as
/// 2/x_eff towards x_eff -> 0.
inline double saturation_boost(double x_eff) {
  if (x_eff < 0) throw std::invalid_argument("saturation_boost: x_eff must be positive");
  if (x_eff == 0.0)
    throw std::domain_error("saturation_boost: diverges at x_eff = 0 (asymptote 2/x_eff)");
  return 1.0 / std::tanh(0.5 * x_eff);
}

/// Hot-bath inverse temperature where all currents of the spectrally
/// separated single-sideband machine vanish: beta_c (omega0-Omega)/(omega0+Omega).
inline double critical_hot_beta(double beta_c, double omega0, double drive_frequency) {
  if (!(beta_c > 0)) throw std::invalid_argument("critical_hot_beta: beta_c must be positive");
  if (drive_frequency < 0 || !(drive_frequency < omega0))
    throw config_error("critical_hot_beta: need 0 <= Omega < omega0");
  return beta_c * (omega0 - drive_frequency) / (omega0 + drive_frequency);
}

}  // namespace dicke
