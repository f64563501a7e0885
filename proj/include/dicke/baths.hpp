#pragma once

// Heat-bath specifications and the per-(bath, sideband) emission and
// absorption rates entering the master equation. Units: hbar = 1 and
// omega0 = 1 by convention; temperatures enter as x = beta * omega0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "dicke/floquet.hpp"

namespace dicke {

enum class BathLabel { cold, hot };

inline const char* to_string(BathLabel b) { return b == BathLabel::cold ? "cold" : "hot"; }

/// G(omega) = gamma0 [n(omega) + 1] inside the window, 0 outside.
struct FlatSpectrum {
  double gamma0 = 1.0;
  double omega_min = 0.0;
  double omega_max = std::numeric_limits<double>::infinity();
};

/// Spectrally separated step: the cold bath couples only below the edge,
/// the hot bath only above it; the edge itself is dead for both.
struct SeparatedSpectrum {
  double level = 1.0;  // G on the live side, supplied as an opaque rate
  double edge = 1.0;   // omega0
};

/// Direct samples omega -> G(omega), ascending omega, linear interpolation.
struct TabulatedSpectrum {
  std::vector<double> omega;
  std::vector<double> value;
};

struct BathSpec {
  BathLabel label = BathLabel::cold;
  double beta = 1.0;  // inverse temperature; +infinity = zero occupation
  std::variant<FlatSpectrum, SeparatedSpectrum, TabulatedSpectrum> model = FlatSpectrum{};
};

inline BathSpec flat_bath(BathLabel label, double beta, double gamma0 = 1.0, double omega_min = 0.0,
                          double omega_max = std::numeric_limits<double>::infinity()) {
  return {label, beta, FlatSpectrum{gamma0, omega_min, omega_max}};
}

inline BathSpec separated_bath(BathLabel label, double beta, double level = 1.0, double edge = 1.0) {
  return {label, beta, SeparatedSpectrum{level, edge}};
}

inline void validate_bath(const BathSpec& spec) {
  if (!(spec.beta > 0))
    throw std::invalid_argument("BathSpec: beta must be positive");
  if (const auto* flat = std::get_if<FlatSpectrum>(&spec.model)) {
    if (flat->gamma0 < 0) throw std::invalid_argument("BathSpec: gamma0 must be >= 0");
    if (!(flat->omega_min <= flat->omega_max))
      throw std::invalid_argument("BathSpec: empty flat window");
  } else if (const auto* sep = std::get_if<SeparatedSpectrum>(&spec.model)) {
    if (sep->level < 0) throw std::invalid_argument("BathSpec: level must be >= 0");
    if (!(sep->edge > 0)) throw std::invalid_argument("BathSpec: edge must be positive");
  } else {
    const auto& tab = std::get<TabulatedSpectrum>(spec.model);
    if (tab.omega.size() < 2 || tab.omega.size() != tab.value.size())
      throw std::invalid_argument("BathSpec: tabulated spectrum needs matching samples");
    if (!std::is_sorted(tab.omega.begin(), tab.omega.end()))
      throw std::invalid_argument("BathSpec: tabulated frequencies must ascend");
    if (std::any_of(tab.value.begin(), tab.value.end(), [](double g) { return g < 0; }))
      throw std::invalid_argument("BathSpec: tabulated G values must be >= 0");
  }
}

/// Thermal occupation 1/(e^{beta omega} - 1).
inline double planck_occupation(double beta, double omega) {
  if (!(omega > 0)) throw std::invalid_argument("planck_occupation: omega must be positive");
  if (!(beta > 0)) throw std::invalid_argument("planck_occupation: beta must be positive");
  return 1.0 / std::expm1(beta * omega);
}

/// Bath response G(omega) per the spectral model.
inline double bath_spectrum(const BathSpec& spec, double omega) {
  if (!(omega > 0)) throw std::invalid_argument("bath_spectrum: omega must be positive");
  if (const auto* flat = std::get_if<FlatSpectrum>(&spec.model)) {
    if (omega < flat->omega_min || omega > flat->omega_max) return 0.0;
    return flat->gamma0 * (planck_occupation(spec.beta, omega) + 1.0);
  }
  if (const auto* sep = std::get_if<SeparatedSpectrum>(&spec.model)) {
    if (spec.label == BathLabel::cold) return omega >= sep->edge ? 0.0 : sep->level;
    return omega <= sep->edge ? 0.0 : sep->level;
  }
  const auto& tab = std::get<TabulatedSpectrum>(spec.model);
  if (omega < tab.omega.front() || omega > tab.omega.back())
    throw std::out_of_range("bath_spectrum: omega outside tabulated range");
  auto hi = std::upper_bound(tab.omega.begin(), tab.omega.end(), omega);
  if (hi == tab.omega.end()) return tab.value.back();
  if (hi == tab.omega.begin()) return tab.value.front();
  const auto lo = hi - 1;
  const std::size_t k = lo - tab.omega.begin();
  const double f = (omega - *lo) / (*hi - *lo);
  return (1.0 - f) * tab.value[k] + f * tab.value[k + 1];
}

/// One active photon-exchange channel: emission rate (1/2) P(q) G_i(omega0 + q Omega)
/// and absorption rate emission * exp(-beta_i (omega0 + q Omega)).
struct SidebandChannel {
  BathLabel bath;
  int q;
  double omega;
  double emission;
  double absorption;
};

struct SidebandRates {
  double omega0 = 1.0;
  double drive_frequency = 0.0;
  std::vector<SidebandChannel> channels;  // cold then hot, ascending q

  double emission(BathLabel bath, int q) const {
    for (const auto& c : channels)
      if (c.bath == bath && c.q == q) return c.emission;
    return 0.0;
  }
  double absorption(BathLabel bath, int q) const {
    for (const auto& c : channels)
      if (c.bath == bath && c.q == q) return c.absorption;
    return 0.0;
  }
};

/// Assembles the active channels; sidebands with P(q) at or below
/// `weight_floor` and channels with zero coupling are omitted.
inline SidebandRates sideband_rates(const BathSpec& cold, const BathSpec& hot,
                                    const FloquetWeights& weights, double omega0,
                                    double drive_frequency, double weight_floor = 1e-12) {
  if (cold.label != BathLabel::cold || hot.label != BathLabel::hot)
    throw config_error("sideband_rates: bath labels do not match their roles");
  if (!(omega0 > 0)) throw config_error("sideband_rates: omega0 must be positive");
  validate_bath(cold);
  validate_bath(hot);

  SidebandRates out;
  out.omega0 = omega0;
  out.drive_frequency = drive_frequency;
  for (const BathSpec* bath : {&cold, &hot}) {
    for (const auto& [q, p] : weights.weights) {
      if (p <= weight_floor) continue;
      const double omega = omega0 + q * drive_frequency;
      if (!(omega > 0))
        throw config_error("sideband_rates: retained sideband q=" + std::to_string(q) +
                           " has non-positive frequency");
      const double emission = 0.5 * p * bath_spectrum(*bath, omega);
      if (emission <= 0.0) continue;
      out.channels.push_back(
          {bath->label, q, omega, emission, emission * std::exp(-bath->beta * omega)});
    }
  }
  return out;
}

}  // namespace dicke
