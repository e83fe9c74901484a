#include <doctest.h>

#include <cmath>
#include <vector>

#include "mrange/errors.hpp"
#include "mrange/motor.hpp"

using namespace mrange;

namespace {

const MotorPropCoeffs kProbe{1e-7, 1e-3, 2e-7, 1e-17};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

int derivative_sign_changes(const MotorPropCoeffs& c) {
  const auto g = log_grid(1.0, 1e5, 10000);
  int changes = 0;
  int last = 0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double d = efficiency(c, g[i]) - efficiency(c, g[i - 1]);
    const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (s != 0 && last != 0 && s != last) ++changes;
    if (s != 0) last = s;
  }
  return changes;
}

}  // namespace

TEST_CASE("drag torque") {
  CHECK(drag_torque({1e-7, 0, 1, 0}, 1000.0) == doctest::Approx(0.1));
  CHECK(drag_torque({1e-7, 0, 1, 0}, 2000.0) == doctest::Approx(0.4));
  CHECK(drag_torque({3e-6, 0, 1, 0}, 0.0) == 0.0);
  CHECK_THROWS_AS(drag_torque(kProbe, -1.0), DomainError);
}

TEST_CASE("efficiency limits") {
  CHECK(efficiency(kProbe, 1e-3) < 1e-4);
  CHECK(efficiency(kProbe, 1e6) < 1e-2);
  CHECK_THROWS_AS(efficiency(kProbe, 0.0), DomainError);
  const double w = 900.0;
  const double direct = kProbe.c_d * w * w * w /
                        (kProbe.m0 * w + kProbe.m1 * w * w * w + kProbe.m2 * std::pow(w, 6));
  CHECK(efficiency(kProbe, w) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("efficiency above one is returned unclamped") {
  const MotorPropCoeffs c{1e-6, 0.0, 1e-7, 0.0};
  CHECK(efficiency(c, 100.0) == doctest::Approx(10.0));
}

TEST_CASE("electrical power") {
  CHECK(electrical_power_from_mech(74.8, 0.75) == doctest::Approx(99.8).epsilon(0.1 / 99.8));
  CHECK(electrical_power_from_mech(89.4, 0.75) == doctest::Approx(119.3).epsilon(0.1 / 119.3));
  CHECK(electrical_power(0.0, 500.0, 0.8) == 0.0);
  CHECK(electrical_power(0.1, 1000.0, 0.5) == doctest::Approx(200.0));
  CHECK_THROWS_AS(electrical_power(0.1, 100.0, 0.0), DomainError);
  CHECK_THROWS_AS(electrical_power_from_mech(10.0, -0.1), DomainError);
}

TEST_CASE("electrical power never below mechanical") {
  for (double eta = 0.05; eta <= 1.0; eta += 0.05)
    for (double q = 0.0; q < 1.0; q += 0.13)
      for (double w = 0.0; w < 3000.0; w += 370.0) CHECK(electrical_power(q, w, eta) >= q * w);
}

TEST_CASE("monotone in every argument") {
  double prev = 0.0;
  for (double w = 0.0; w < 5000.0; w += 10.0) {
    const double q = drag_torque(kProbe, w);
    CHECK(q >= prev);
    prev = q;
  }
  for (double q = 0.0; q < 1.0; q += 0.05) {
    CHECK(electrical_power(q + 0.05, 800.0, 0.7) >= electrical_power(q, 800.0, 0.7));
    CHECK(electrical_power(q, 810.0, 0.7) >= electrical_power(q, 800.0, 0.7));
  }
}

TEST_CASE("efficiency is unimodal") {
  CHECK(derivative_sign_changes(kProbe) == 1);
  CHECK(derivative_sign_changes({1.5e-8, 8.457e-3, 1.441e-8, 1.487e-19}) == 1);
  CHECK(derivative_sign_changes({2e-6, 5e-3, 1e-6, 1e-15}) == 1);
}

TEST_CASE("speed for a mechanical power") {
  const double w = omega_for_mech_power(kProbe, 250.0);
  CHECK(drag_torque(kProbe, w) * w == doctest::Approx(250.0).epsilon(1e-12));
  CHECK(omega_for_mech_power(kProbe, 0.0) == 0.0);
}

TEST_CASE("coefficient invariants") {
  CHECK_THROWS_AS((MotorPropCoeffs{0.0, 0, 1, 0}.validate()), InputError);
  CHECK_THROWS_AS((MotorPropCoeffs{1, -1, 1, 0}.validate()), InputError);
  CHECK_THROWS_AS((MotorPropCoeffs{1, 0, 0, 0}.validate()), InputError);
  CHECK_THROWS_AS((MotorPropCoeffs{1, 0, 1, -1}.validate()), InputError);
  CHECK_NOTHROW(kProbe.validate());
}
