#include <doctest.h>

#include <cmath>

#include "mrange/aero.hpp"
#include "mrange/errors.hpp"
#include "support.hpp"

using namespace mrange;
using testing_support::dji_spec;

namespace {

// Independent momentum-theory oracle: thrust per rotor T = m g / N equals
// 2 rho A v^2 for a rotor disc A = pi r^2; ideal power T v per rotor.
double oracle_vih(double m, double g, double rho, double r, int n) {
  const double thrust = m * g / n;
  return std::sqrt(thrust / (2.0 * rho * kPi * r * r));
}

double oracle_ph(double m, double g, double rho, double r, int n, double fom) {
  return n * (m * g / n) * oracle_vih(m, g, rho, r, n) / fom;
}

}  // namespace

TEST_CASE("hover point of the reference vehicle") {
  const auto h = hover_point(dji_spec(), default_environment());
  CHECK(h.induced_velocity == doctest::Approx(4.94).epsilon(0.01 / 4.94));
  CHECK(h.hover_power_mech == doctest::Approx(73.5).epsilon(0.5 / 73.5));
  CHECK(h.per_rotor_thrust == doctest::Approx(0.909 * 9.81 / 4));
  CHECK(h.induced_velocity == doctest::Approx(oracle_vih(0.909, 9.81, 1.2, 0.11, 4)).epsilon(1e-12));
  CHECK(h.hover_power_mech ==
        doctest::Approx(oracle_ph(0.909, 9.81, 1.2, 0.11, 4, 0.6)).epsilon(1e-12));
}

TEST_CASE("standard-atmosphere density lowers induced velocity") {
  const auto h = hover_point(dji_spec(), Environment(1.225, 9.81));
  CHECK(h.induced_velocity == doctest::Approx(4.89).epsilon(0.01 / 4.89));
}

TEST_CASE("mass scaling laws") {
  const auto spec = dji_spec();
  const auto env = default_environment();
  const auto a = hover_point(spec, env);
  const auto b = hover_point(spec.with_mass(4 * spec.mass_kg()), env);
  CHECK(b.induced_velocity / a.induced_velocity == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.hover_power_mech / a.hover_power_mech == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("density homogeneity") {
  const auto spec = dji_spec();
  const auto a = hover_point(spec, Environment(1.2, 9.81));
  for (double s : {0.25, 0.5, 2.0, 3.7}) {
    const auto b = hover_point(spec, Environment(1.2 * s, 9.81));
    CHECK(b.induced_velocity / a.induced_velocity == doctest::Approx(1.0 / std::sqrt(s)).epsilon(1e-12));
    CHECK(b.hover_power_mech / a.hover_power_mech == doctest::Approx(1.0 / std::sqrt(s)).epsilon(1e-12));
  }
}

TEST_CASE("zero-weight limit of the raw kernels") {
  CHECK(induced_velocity_hover(0.0, 1.2, 0.11, 4) == 0.0);
  CHECK(hover_power_mech(0.0, 1.2, 0.11, 4, 0.6) == 0.0);
}

TEST_CASE("cruise powers") {
  const auto c = builtin_empirical_coeffs();
  const auto a = cruise_powers(81.9, c);
  CHECK(a.endurance == doctest::Approx(74.9).epsilon(0.1 / 74.9));
  CHECK(a.range == doctest::Approx(89.4).epsilon(0.1 / 89.4));
  const auto z = cruise_powers(0.0, c);
  CHECK(z.endurance == 0.0);
  CHECK(z.range == 0.0);
  const auto h = cruise_powers(100.0, c);
  CHECK(h.endurance == doctest::Approx(91.4));
  CHECK(h.range == doctest::Approx(109.2));
  CHECK_THROWS_AS(cruise_powers(-1.0, c), InputError);
  const auto sd = cruise_power_sd(100.0, c);
  CHECK(sd.endurance == doctest::Approx(3.23));
  CHECK(sd.range == doctest::Approx(3.61));
}

TEST_CASE("endurance power below hover below range power") {
  const auto c = builtin_empirical_coeffs();
  for (double ph = 1e-3; ph < 1e5; ph *= 1.7) {
    const auto p = cruise_powers(ph, c);
    CHECK(p.endurance < ph);
    CHECK(ph < p.range);
  }
}

TEST_CASE("optimal speeds of the reference vehicle") {
  const auto c = builtin_empirical_coeffs();
  const auto s = optimal_speeds(4.94, 194.7, c);
  CHECK(s.endurance == doctest::Approx(8.2).epsilon(0.1 / 8.2));
  CHECK(s.range == doctest::Approx(14.2).epsilon(0.1 / 14.2));
  const double denom_e = 0.10188 + 0.071358 * 4.94 + 0.0007381 * 194.7;
  CHECK(denom_e == doctest::Approx(0.598).epsilon(0.001 / 0.598));
  CHECK(s.inverse_norm_endurance == doctest::Approx(denom_e).epsilon(1e-12));
  CHECK(s.endurance == doctest::Approx(4.94 / denom_e).epsilon(1e-12));
  CHECK_THROWS_AS(optimal_speeds(0.0, 194.7, c), InputError);
  CHECK_THROWS_AS(optimal_speeds(4.94, 0.0, c), InputError);
}

TEST_CASE("range speed exceeds endurance speed on the input grid") {
  const auto c = builtin_empirical_coeffs();
  for (int i = 1; i <= 200; ++i)
    for (int j = 1; j <= 200; ++j) {
      const double v = 20.0 * i / 200;
      const double a = 1000.0 * j / 200;
      const auto s = optimal_speeds(v, a, c);
      REQUIRE(s.range > s.endurance);
      REQUIRE(s.endurance > 0.0);
    }
}
