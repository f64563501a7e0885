#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dicke/engine.hpp"
#include "dicke/sweep.hpp"

using namespace dicke;
using Catch::Approx;

namespace {

// The spectrally separated sinusoidal machine of sec. 6 / figs. 6-7.
MachineConfig sin_machine(double x_cold, double x_hot, double drive = 0.3,
                          double g_ratio = 0.01, bool numeric = false) {
  SinMachineOptions opt;
  opt.x_cold = x_cold;
  opt.drive_frequency = drive;
  opt.g_ratio = g_ratio;
  opt.numeric_weights = numeric;
  return sin_machine_config(opt, x_hot);
}

}  // namespace

TEST_CASE("effective temperature: equilibrium with a single bath") {
  MachineConfig config;
  config.cold = flat_bath(BathLabel::cold, 1.7, 1.0);
  config.hot = separated_bath(BathLabel::hot, 1.0, 0.0);  // decoupled
  const auto eff = effective_boltzmann(config);
  CHECK(eff.boltzmann_factor == Approx(std::exp(-1.7)).margin(1e-14));
  CHECK(eff.x_eff == Approx(1.7).margin(1e-12));
}

TEST_CASE("effective temperature of the fig. 6 and fig. 7 machines") {
  // frozen from 30-digit evaluation of the closed form
  const auto fig6 = effective_boltzmann(sin_machine(2.3, 1e-12));
  CHECK(fig6.x_eff == Approx(0.51091928309035119).margin(1e-12));
  const auto fig7 = effective_boltzmann(sin_machine(-std::log(0.9), 1e-12));
  CHECK(fig7.x_eff == Approx(0.036196408181593928).margin(1e-12));
}

TEST_CASE("effective Boltzmann factor sits between the channel factors") {
  const auto rates = machine_rates(sin_machine(2.3, 0.4));
  const auto eff = effective_boltzmann(rates);
  double lo = 1.0, hi = 0.0;
  for (const auto& c : rates.channels) {
    lo = std::min(lo, c.absorption / c.emission);
    hi = std::max(hi, c.absorption / c.emission);
  }
  CHECK(eff.boltzmann_factor > lo);
  CHECK(eff.boltzmann_factor < hi);
  CHECK(eff.boltzmann_factor > 0.0);
  CHECK(eff.boltzmann_factor < 1.0);
}

TEST_CASE("no coupling raises") {
  MachineConfig config;
  config.cold = separated_bath(BathLabel::cold, 1.0, 0.0);
  config.hot = separated_bath(BathLabel::hot, 1.0, 0.0);
  CHECK_THROWS_AS(effective_boltzmann(config), no_coupling_error);
}

TEST_CASE("amplification factor") {
  for (double x : {0.0, 0.3, 2.3, 7.0})
    CHECK(amplification(SpinQuantumNumber{1}, x) ==
          Approx(1.0 / (1.0 + std::exp(-x))).margin(1e-14));
  CHECK(amplification(SpinQuantumNumber{1}, 2.3) ==
        Approx(0.90887703898514386).margin(1e-14));
  CHECK(amplification(SpinQuantumNumber{3}, 0.0) == Approx(2.5).margin(1e-14));
  // ground-state limit F -> 2j
  CHECK(amplification(SpinQuantumNumber{7}, 40.0) == Approx(7.0).margin(1e-12));
  CHECK(amplification(SpinQuantumNumber{0}, 1.0) == 0.0);
  CHECK_THROWS_AS(amplification(SpinQuantumNumber{2}, -0.1), std::invalid_argument);
}

TEST_CASE("subspace currents vanish where they must") {
  const auto config = sin_machine(2.3, 0.4);
  const auto rates = machine_rates(config);
  const auto eff = effective_boltzmann(rates);

  const auto dark = subspace_currents(SpinQuantumNumber{0}, rates, eff);
  CHECK(dark.j_cold == 0.0);
  CHECK(dark.j_hot == 0.0);
  CHECK(dark.mode == MachineMode::idle);

  // equal temperatures, constant modulation: global equilibrium
  MachineConfig eq;
  eq.cold = flat_bath(BathLabel::cold, 1.1, 1.0);
  eq.hot = flat_bath(BathLabel::hot, 1.1, 0.7);
  const auto eq_rates = machine_rates(eq);
  const auto eq_eff = effective_boltzmann(eq_rates);
  const auto c = subspace_currents(SpinQuantumNumber{4}, eq_rates, eq_eff);
  CHECK(std::abs(c.j_cold) < 1e-15);
  CHECK(std::abs(c.j_hot) < 1e-15);

  // all three currents vanish at the critical hot temperature
  const double crit = critical_hot_beta(2.3, 1.0, 0.3);
  CHECK(crit == Approx(1.2384615384615385).margin(1e-15));
  const auto at_crit = total_currents(sin_machine(2.3, crit));
  CHECK(std::abs(at_crit.j_cold) < 1e-16);
  CHECK(std::abs(at_crit.j_hot) < 1e-16);
  CHECK(std::abs(at_crit.power) < 1e-16);
  CHECK(at_crit.mode == MachineMode::idle);
}

TEST_CASE("total currents weight the invariant subspaces") {
  auto config = sin_machine(2.3, 0.2);
  config.n_atoms = 3;

  // all weight in the doublets: three atoms act like one
  config.subspace_weights = {{SpinQuantumNumber{1}, 1.0}};
  const auto doublet = total_currents(config);
  const auto single = subspace_currents(SpinQuantumNumber{1}, config, effective_boltzmann(config));
  CHECK(doublet.j_cold == Approx(single.j_cold).epsilon(1e-14));
  CHECK(doublet.j_hot == Approx(single.j_hot).epsilon(1e-14));
  CHECK(doublet.power == Approx(single.power).epsilon(1e-14));

  // default weights {N/2: 1}
  config.subspace_weights.clear();
  const auto coll = total_currents(config);
  const auto quad = subspace_currents(SpinQuantumNumber{3}, config, effective_boltzmann(config));
  CHECK(coll.power == Approx(quad.power).epsilon(1e-14));

  // near x_eff = 0 the spin-3/2 power is 5x the single-atom power
  auto hot_config = sin_machine(1e-6, 1e-9);
  const auto eff = effective_boltzmann(hot_config);
  const auto p32 = subspace_currents(SpinQuantumNumber{3}, hot_config, eff);
  const auto p12 = subspace_currents(SpinQuantumNumber{1}, hot_config, eff);
  CHECK(p32.power / p12.power == Approx(5.0).margin(1e-4));

  // invalid subspace weights
  config.subspace_weights = {{SpinQuantumNumber{2}, 1.0}};  // j=1 absent for N=3
  CHECK_THROWS_AS(total_currents(config), config_error);
  config.subspace_weights = {{SpinQuantumNumber{3}, 0.7}};
  CHECK_THROWS_AS(total_currents(config), config_error);
  config.subspace_weights = {{SpinQuantumNumber{3}, 1.5}, {SpinQuantumNumber{1}, -0.5}};
  CHECK_THROWS_AS(total_currents(config), config_error);
}

TEST_CASE("equal amplification of all currents") {
  const auto rates = machine_rates(sin_machine(2.3, 0.2));
  const auto eff = effective_boltzmann(rates);
  const auto base = subspace_currents(SpinQuantumNumber{1}, rates, eff);
  for (int twice_j : {2, 3, 7, 50}) {
    const auto amplified = subspace_currents(SpinQuantumNumber{twice_j}, rates, eff);
    const double expected = amplification(SpinQuantumNumber{twice_j}, eff.x_eff) /
                            amplification(SpinQuantumNumber{1}, eff.x_eff);
    CHECK(amplified.j_cold / base.j_cold == Approx(expected).epsilon(1e-12));
    CHECK(amplified.j_hot / base.j_hot == Approx(expected).epsilon(1e-12));
    CHECK(amplified.power / base.power == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("power ratio and its limits") {
  for (double x : {1e-6, 0.3, 2.0}) CHECK(power_ratio(1, x) == 1.0);
  CHECK(power_ratio(2, 0.0) == Approx(4.0 / 3.0).margin(1e-14));

  CHECK(boost_limits(10) == std::pair{1.0, 4.0});
  CHECK(boost_limits(1) == std::pair{1.0, 1.0});

  for (int n : {1, 2, 3, 7, 25, 88, 200}) {
    CHECK(power_ratio(n, 40.0) == Approx(1.0).margin(1e-6));
    CHECK(power_ratio(n, 1e-8) == Approx((n + 2) / 3.0).epsilon(1e-4));
  }

  // paper figure captions
  CHECK(power_ratio(100, 0.51091928309035119) == Approx(3.8793468436280672).margin(1e-10));
  CHECK(power_ratio(100, 0.036196408181593928) == Approx(28.236806283198854).margin(1e-8));
  CHECK_THROWS_AS(power_ratio(0, 1.0), std::invalid_argument);
}

TEST_CASE("monotonicity and sandwich bounds on a grid") {
  const std::vector<int> ns{1, 2, 3, 5, 10, 20, 50, 100, 200};
  std::vector<double> xs;
  for (int i = 0; i <= 40; ++i) xs.push_back(1e-3 * std::pow(10.0, 4.0 * i / 40.0));
  double prev_in_n = 0.0;
  for (std::size_t ni = 0; ni < ns.size(); ++ni) {
    double prev_in_x = std::numeric_limits<double>::infinity();
    for (double x : xs) {
      const double r = power_ratio(ns[ni], x);
      CHECK(r <= prev_in_x * (1 + 1e-12));  // non-increasing in x
      prev_in_x = r;
      CHECK(r >= 1.0 - 1e-12);
      CHECK(r <= std::min((ns[ni] + 2) / 3.0, saturation_boost(x)) * (1 + 1e-12));
      if (ni > 0) {
        // non-decreasing in N at fixed x
        CHECK(r >= power_ratio(ns[ni - 1], x) * (1 - 1e-12));
      }
    }
    (void)prev_in_n;
  }
}

TEST_CASE("saturation boost") {
  CHECK(saturation_boost(0.2) == Approx(10.03331113225399).margin(1e-12));
  CHECK(saturation_boost(0.51091928309035119) == Approx(3.9992976866242021).margin(1e-12));
  CHECK(saturation_boost(0.036196408181593928) == Approx(55.260133782460711).margin(1e-10));
  CHECK_THROWS_AS(saturation_boost(0.0), std::domain_error);
  CHECK_THROWS_AS(saturation_boost(-1.0), std::invalid_argument);
}

TEST_CASE("mode classification") {
  CHECK(total_currents(sin_machine(2.3, 0.2)).mode == MachineMode::engine);
  CHECK(total_currents(sin_machine(2.3, 2.0)).mode == MachineMode::refrigerator);
  CHECK(classify_mode(-1.0, -1.0, 2.0) == MachineMode::heat_distributor);
  CHECK(classify_mode(1e-18, -1e-18, 0.0) == MachineMode::idle);
  CHECK(classify_mode(0.0, 0.0, 0.0) == MachineMode::idle);
  CHECK_THROWS_AS(classify_mode(1.0, -1.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("mode boundary brackets the critical temperature") {
  const double crit = critical_hot_beta(2.3, 1.0, 0.3);
  double lo = 1.0, hi = 1.5;
  REQUIRE(total_currents(sin_machine(2.3, lo)).power < 0);
  REQUIRE(total_currents(sin_machine(2.3, hi)).power > 0);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (total_currents(sin_machine(2.3, mid)).power < 0 ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == Approx(crit).margin(1e-9));
}

TEST_CASE("efficiency") {
  const auto rates = machine_rates(sin_machine(2.3, 0.2));
  const auto eff = effective_boltzmann(rates);
  const auto one = subspace_currents(SpinQuantumNumber{1}, rates, eff);
  REQUIRE(one.mode == MachineMode::engine);
  REQUIRE(one.efficiency.has_value());

  // closed channel form: eta = 1 + (omega0-Omega) Gc bc / ((omega0+Omega) Gh bh)
  const double bf = eff.boltzmann_factor;
  const double bc = std::exp(-2.3 * 0.7) - bf;
  const double bh = std::exp(-0.2 * 1.3) - bf;
  const double expected = 1.0 + 0.7 * bc / (1.3 * bh);
  CHECK(*one.efficiency == Approx(expected).epsilon(1e-12));
  CHECK(*one.efficiency > 0.0);
  CHECK(*one.efficiency < 1.0);

  // no collective effect on the efficiency
  const auto collective = subspace_currents(SpinQuantumNumber{100}, rates, eff);
  CHECK(*collective.efficiency == Approx(*one.efficiency).margin(1e-12));

  // second law: below Carnot
  CHECK(*one.efficiency <= 1.0 - 0.2 / 2.3 + 1e-12);

  // undefined outside engine mode
  CHECK_FALSE(total_currents(sin_machine(2.3, 2.0)).efficiency.has_value());
}

TEST_CASE("second law on a machine grid") {
  for (double x_c : {1.2, 2.3, 3.0})
    for (double x_h : {0.01, 0.2, 0.6}) {
      const auto currents = total_currents(sin_machine(x_c, x_h));
      if (currents.mode != MachineMode::engine) continue;
      CHECK(*currents.efficiency <= 1.0 - x_h / x_c + 1e-12);
    }
}

TEST_CASE("first law holds exactly by construction") {
  for (double x_h : {1e-4, 0.3, 1.2384615384615385, 2.7}) {
    const auto c = total_currents(sin_machine(2.3, x_h));
    CHECK(c.j_cold + c.j_hot + c.power == 0.0);
  }
}

TEST_CASE("critical hot temperature") {
  CHECK(critical_hot_beta(2.3, 1.0, 0.3) == Approx(1.2384615384615385).margin(1e-15));
  CHECK(critical_hot_beta(0.1054, 1.0, 0.3) == Approx(0.056753846153846154).margin(1e-15));
  CHECK(critical_hot_beta(1.4, 1.0, 0.0) == Approx(1.4).margin(1e-15));
  CHECK_THROWS_AS(critical_hot_beta(1.0, 1.0, 1.0), config_error);
  CHECK_THROWS_AS(critical_hot_beta(1.0, 1.0, 1.3), config_error);
  CHECK_THROWS_AS(critical_hot_beta(-1.0, 1.0, 0.3), std::invalid_argument);
}
