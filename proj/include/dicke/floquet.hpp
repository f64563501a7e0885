#pragma once

// Floquet sideband weights P(q) of a periodic transition-frequency
// modulation omega(t):
//
//   P(q) = | (1/tau) \int_0^tau exp(i Phi(t)) e^{-i q Omega t} dt |^2,
//   Phi(t) = \int_0^t [omega(s) - omega0] ds,  tau = 2 pi / Omega.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dicke/common.hpp"

namespace dicke {

struct ConstantModulation {};

struct SinusoidalModulation {
  double depth = 0.0;            // g
  double drive_frequency = 0.0;  // Omega
};

/// Samples of omega(t) over exactly one period, ascending t.
struct TabulatedModulation {
  std::vector<double> time;
  std::vector<double> omega;
};

struct ModulationSpec {
  double omega0 = 1.0;
  std::variant<ConstantModulation, SinusoidalModulation, TabulatedModulation> form =
      ConstantModulation{};

  static ModulationSpec constant(double omega0 = 1.0) { return {omega0, ConstantModulation{}}; }

  static ModulationSpec sinusoidal(double omega0, double depth, double drive_frequency) {
    if (!(drive_frequency > 0))
      throw std::invalid_argument("ModulationSpec: drive frequency must be positive");
    return {omega0, SinusoidalModulation{depth, drive_frequency}};
  }

  static ModulationSpec tabulated(double omega0, std::vector<double> time, std::vector<double> omega) {
    if (time.size() < 2 || time.size() != omega.size())
      throw std::invalid_argument("ModulationSpec: tabulated form needs matching t/omega samples");
    if (!std::is_sorted(time.begin(), time.end()) || !(time.back() > time.front()))
      throw std::invalid_argument("ModulationSpec: tabulated samples must ascend over one period");
    ModulationSpec spec{omega0, TabulatedModulation{std::move(time), std::move(omega)}};
    const auto& tab = std::get<TabulatedModulation>(spec.form);
    // Periodicity condition: the period-average of omega(t) must equal omega0.
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < tab.time.size(); ++i)
      integral += 0.5 * (tab.omega[i] + tab.omega[i + 1]) * (tab.time[i + 1] - tab.time[i]);
    const double tau = tab.time.back() - tab.time.front();
    if (std::abs(integral / tau - omega0) > 1e-9)
      throw std::invalid_argument("ModulationSpec: mean of tabulated omega(t) differs from omega0");
    return spec;
  }

  double drive_frequency() const {
    if (const auto* sin = std::get_if<SinusoidalModulation>(&form)) return sin->drive_frequency;
    if (const auto* tab = std::get_if<TabulatedModulation>(&form))
      return 2.0 * std::numbers::pi / (tab->time.back() - tab->time.front());
    return 0.0;  // constant: no sidebands
  }
};

/// Advisory check of the working regime 0 <= g << Omega <= omega0.
inline std::optional<std::string> modulation_warning(const ModulationSpec& spec) {
  const auto* sin = std::get_if<SinusoidalModulation>(&spec.form);
  if (!sin) return std::nullopt;
  if (sin->depth < 0) return "modulation depth g is negative";
  if (sin->depth > 0.5 * sin->drive_frequency) return "modulation depth g is not small against Omega";
  if (sin->drive_frequency > spec.omega0) return "drive frequency Omega exceeds omega0";
  return std::nullopt;
}

struct FloquetWeights {
  std::map<int, double> weights;  // q -> P(q), |q| <= q_max
  int q_max = 0;
  double residual = 0.0;  // 1 - sum of retained weights
  bool approximation_warning = false;

  double at(int q) const {
    auto it = weights.find(q);
    return it == weights.end() ? 0.0 : it->second;
  }
  double sum() const {
    double s = 0.0;
    for (const auto& [q, p] : weights) s += p;
    return s;
  }
};

/// P(q) by quadrature of the defining Fourier integral over one period.
/// Phi is closed-form for the constant (Phi = 0) and sinusoidal
/// (Phi = (g/Omega)(1 - cos Omega t)) forms, cumulative trapezoid for
/// tabulated samples. The integrand is periodic, so the uniform rule is
/// spectrally accurate.
inline FloquetWeights floquet_weights_numeric(const ModulationSpec& spec, int q_max = 8,
                                              int grid_points = 4096,
                                              double residual_tol = 1e-10) {
  if (q_max < 1) throw std::invalid_argument("floquet_weights_numeric: q_max must be positive");
  if (grid_points < 64) throw std::invalid_argument("floquet_weights_numeric: grid_points < 64");

  FloquetWeights out;
  out.q_max = q_max;

  if (std::holds_alternative<ConstantModulation>(spec.form)) {
    out.weights[0] = 1.0;
    out.residual = 0.0;
    return out;
  }

  const int n = grid_points;
  const double omega_drive = spec.drive_frequency();
  const double tau = 2.0 * std::numbers::pi / omega_drive;
  const double dt = tau / n;

  std::vector<double> phase(n);  // Phi(t_i), t_i = i dt
  if (const auto* sin = std::get_if<SinusoidalModulation>(&spec.form)) {
    const double ratio = sin->depth / sin->drive_frequency;
    for (int i = 0; i < n; ++i)
      phase[i] = ratio * (1.0 - std::cos(omega_drive * i * dt));
  } else {
    const auto& tab = std::get<TabulatedModulation>(spec.form);
    // Resample omega(t) - omega0 onto the uniform grid, then integrate.
    const double t0 = tab.time.front();
    std::vector<double> detune(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double t = t0 + std::min(double(i) * dt, tau);
      auto hi = std::upper_bound(tab.time.begin(), tab.time.end(), t);
      if (hi == tab.time.begin()) hi = tab.time.begin() + 1;
      if (hi == tab.time.end()) hi = tab.time.end() - 1;
      const auto lo = hi - 1;
      const std::size_t k = lo - tab.time.begin();
      const double f = (t - *lo) / (*hi - *lo);
      detune[i] = (1.0 - f) * tab.omega[k] + f * tab.omega[k + 1] - spec.omega0;
    }
    phase[0] = 0.0;
    for (int i = 1; i < n; ++i)
      phase[i] = phase[i - 1] + 0.5 * (detune[i - 1] + detune[i]) * dt;
  }

  std::vector<Complex> integrand(n);
  for (int i = 0; i < n; ++i) integrand[i] = std::polar(1.0, phase[i]);

  for (int q = -q_max; q <= q_max; ++q) {
    Complex acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += integrand[i] * std::polar(1.0, -q * omega_drive * i * dt);
    acc /= double(n);
    out.weights[q] = std::norm(acc);
  }
  out.residual = 1.0 - out.sum();
  if (out.residual > residual_tol)
    throw truncation_error("floquet_weights_numeric: residual " + std::to_string(out.residual) +
                           " above tolerance; increase q_max");
  return out;
}

/// Small-depth sinusoidal approximation: P(0) = 1 - (g/Omega)^2/2,
/// P(+-1) = (g/2 Omega)^2, higher sidebands neglected.
inline FloquetWeights sinusoidal_weights_approx(double depth, double drive_frequency) {
  if (depth < 0) throw std::invalid_argument("sinusoidal_weights_approx: depth must be >= 0");
  if (!(drive_frequency > 0))
    throw std::invalid_argument("sinusoidal_weights_approx: drive frequency must be positive");
  const double ratio = depth / drive_frequency;
  FloquetWeights out;
  out.q_max = 1;
  out.weights[0] = 1.0 - 0.5 * ratio * ratio;
  out.weights[1] = 0.25 * ratio * ratio;
  out.weights[-1] = out.weights[1];
  out.residual = 1.0 - out.sum();
  out.approximation_warning = ratio > 0.2;
  return out;
}

}  // namespace dicke
