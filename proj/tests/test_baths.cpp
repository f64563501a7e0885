#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "dicke/baths.hpp"

using namespace dicke;
using Catch::Approx;

TEST_CASE("planck occupation") {
  CHECK(planck_occupation(50.0, 1.0) < 1e-21);  // frozen mode
  CHECK(planck_occupation(std::log(2.0), 1.0) == Approx(1.0).margin(1e-12));
  // high-temperature asymptotics 1/(beta omega) - 1/2
  const double n = planck_occupation(0.01, 1.0);
  CHECK(n == Approx(99.5).epsilon(1e-3));
  CHECK(n == Approx(99.499).epsilon(1e-4));
  // zero occupation at infinite beta
  CHECK(planck_occupation(std::numeric_limits<double>::infinity(), 1.0) == 0.0);

  CHECK_THROWS_AS(planck_occupation(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(planck_occupation(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(planck_occupation(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("spectrally separated baths die on the wrong side of the edge") {
  const double omega0 = 1.0, drive = 0.3;
  const auto cold = separated_bath(BathLabel::cold, 2.3, 1.0, omega0);
  const auto hot = separated_bath(BathLabel::hot, 0.1, 1.0, omega0);
  CHECK(bath_spectrum(cold, omega0 + drive) == 0.0);
  CHECK(bath_spectrum(cold, omega0 - drive) == 1.0);
  CHECK(bath_spectrum(hot, omega0 - drive) == 0.0);
  CHECK(bath_spectrum(hot, omega0 + drive) == 1.0);
  // the edge itself is dead for both
  CHECK(bath_spectrum(cold, omega0) == 0.0);
  CHECK(bath_spectrum(hot, omega0) == 0.0);
}

TEST_CASE("flat spectrum carries the bosonic thermal factor") {
  const auto bath = flat_bath(BathLabel::cold, std::log(2.0), 1.0);
  CHECK(bath_spectrum(bath, 1.0) == Approx(2.0).margin(1e-12));  // gamma0 (n+1) = 1*2

  const auto windowed = flat_bath(BathLabel::hot, 1.0, 0.7, 0.5, 1.5);
  CHECK(bath_spectrum(windowed, 0.4) == 0.0);
  CHECK(bath_spectrum(windowed, 2.0) == 0.0);
  CHECK(bath_spectrum(windowed, 1.0) ==
        Approx(0.7 * (planck_occupation(1.0, 1.0) + 1.0)).margin(1e-14));
}

TEST_CASE("tabulated spectrum interpolates and rejects out-of-range queries") {
  BathSpec bath{BathLabel::cold, 1.0, TabulatedSpectrum{{0.5, 1.0, 1.5}, {0.0, 2.0, 1.0}}};
  CHECK(bath_spectrum(bath, 0.75) == Approx(1.0).margin(1e-14));
  CHECK(bath_spectrum(bath, 1.25) == Approx(1.5).margin(1e-14));
  CHECK(bath_spectrum(bath, 1.5) == Approx(1.0).margin(1e-14));
  CHECK_THROWS_AS(bath_spectrum(bath, 0.4), std::out_of_range);
  CHECK_THROWS_AS(bath_spectrum(bath, 1.6), std::out_of_range);
  CHECK_THROWS_AS(bath_spectrum(bath, -1.0), std::invalid_argument);
}

TEST_CASE("bath validation") {
  CHECK_THROWS_AS(validate_bath(flat_bath(BathLabel::cold, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate_bath(flat_bath(BathLabel::cold, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate_bath(flat_bath(BathLabel::cold, 1.0, -0.5)), std::invalid_argument);
  CHECK_THROWS_AS(validate_bath(separated_bath(BathLabel::hot, 1.0, -1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      validate_bath(BathSpec{BathLabel::cold, 1.0, TabulatedSpectrum{{1.0, 0.5}, {1.0, 1.0}}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      validate_bath(BathSpec{BathLabel::cold, 1.0, TabulatedSpectrum{{0.5, 1.0}, {1.0, -1.0}}}),
      std::invalid_argument);
  CHECK_NOTHROW(validate_bath(flat_bath(BathLabel::cold,
                                        std::numeric_limits<double>::infinity())));
}

TEST_CASE("fig. 6 configuration has exactly two active channels") {
  const double omega0 = 1.0, drive = 0.3;
  const auto weights = sinusoidal_weights_approx(0.003, drive);  // g = 0.01 Omega
  const auto cold = separated_bath(BathLabel::cold, 2.3, 1.0, omega0);
  const auto hot = separated_bath(BathLabel::hot, 0.2, 1.0, omega0);
  const auto rates = sideband_rates(cold, hot, weights, omega0, drive);

  REQUIRE(rates.channels.size() == 2);
  CHECK(rates.channels[0].bath == BathLabel::cold);
  CHECK(rates.channels[0].q == -1);
  CHECK(rates.channels[1].bath == BathLabel::hot);
  CHECK(rates.channels[1].q == 1);
  CHECK(rates.emission(BathLabel::cold, -1) == Approx(0.5 * 2.5e-5).margin(1e-18));
  // the cross channels are exactly dead
  CHECK(rates.emission(BathLabel::cold, 1) == 0.0);
  CHECK(rates.emission(BathLabel::hot, -1) == 0.0);
  CHECK(rates.emission(BathLabel::cold, 0) == 0.0);
  CHECK(rates.emission(BathLabel::hot, 0) == 0.0);
}

TEST_CASE("constant modulation with a single flat bath gives one channel") {
  FloquetWeights constant{{{0, 1.0}}, 0, 0.0, false};
  const auto cold = flat_bath(BathLabel::cold, 1.3, 0.8);
  const auto hot = separated_bath(BathLabel::hot, 1.0, 0.0);  // decoupled
  const auto rates = sideband_rates(cold, hot, constant, 1.0, 0.0);
  REQUIRE(rates.channels.size() == 1);
  CHECK(rates.channels[0].q == 0);
  CHECK(rates.channels[0].emission ==
        Approx(0.5 * bath_spectrum(cold, 1.0)).margin(1e-15));
}

TEST_CASE("per-channel detailed balance is exact") {
  const auto weights = floquet_weights_numeric(ModulationSpec::sinusoidal(1.0, 0.24, 0.3), 3,
                                               4096, 1e-4);
  const auto cold = flat_bath(BathLabel::cold, 1.7, 1.0);
  const auto hot = flat_bath(BathLabel::hot, 0.3, 0.5);
  const auto rates = sideband_rates(cold, hot, weights, 1.0, 0.3);
  REQUIRE(!rates.channels.empty());
  for (const auto& c : rates.channels) {
    const double beta = c.bath == BathLabel::cold ? 1.7 : 0.3;
    CHECK(c.absorption / c.emission == Approx(std::exp(-beta * c.omega)).margin(1e-12));
    CHECK(c.absorption <= c.emission);
    CHECK(c.emission >= 0.0);
    CHECK(c.omega > 0.0);
  }
}

TEST_CASE("retained negative sideband frequency is rejected") {
  // strong drive: P(-4) is significant and omega0 - 4*0.3 < 0
  const auto weights = floquet_weights_numeric(ModulationSpec::sinusoidal(1.0, 0.6, 0.3), 6, 4096,
                                               1e-5);
  const auto cold = flat_bath(BathLabel::cold, 1.0);
  const auto hot = flat_bath(BathLabel::hot, 0.5);
  CHECK_THROWS_AS(sideband_rates(cold, hot, weights, 1.0, 0.3), config_error);
}

TEST_CASE("mislabeled baths are rejected") {
  const auto cold = flat_bath(BathLabel::cold, 1.0);
  const auto hot = flat_bath(BathLabel::hot, 0.5);
  FloquetWeights constant{{{0, 1.0}}, 0, 0.0, false};
  CHECK_THROWS_AS(sideband_rates(hot, cold, constant, 1.0, 0.0), config_error);
  CHECK_THROWS_AS(sideband_rates(cold, hot, constant, -1.0, 0.0), config_error);
}
