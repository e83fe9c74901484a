#include "mrange/aero.hpp"

#include <cmath>

#include "mrange/errors.hpp"

namespace mrange {

double induced_velocity_hover(double weight_n, double air_density, double propeller_radius_m,
                              int rotor_count) {
  const double disk_area = kPi * propeller_radius_m * propeller_radius_m * rotor_count;
  return std::sqrt(weight_n / (2.0 * air_density * disk_area));
}

double hover_power_mech(double weight_n, double air_density, double propeller_radius_m,
                        int rotor_count, double figure_of_merit) {
  return std::pow(weight_n, 1.5) /
         (figure_of_merit * std::sqrt(2.0 * air_density * kPi * rotor_count) * propeller_radius_m);
}

HoverPoint hover_point(const VehicleSpec& spec, const Environment& env) {
  const double weight = spec.mass_kg() * env.gravity();
  return HoverPoint{
      .induced_velocity = induced_velocity_hover(weight, env.air_density(),
                                                 spec.propeller_radius_m(), spec.rotor_count()),
      .hover_power_mech =
          hover_power_mech(weight, env.air_density(), spec.propeller_radius_m(),
                           spec.rotor_count(), spec.propeller_figure_of_merit()),
      .per_rotor_thrust = weight / spec.rotor_count(),
  };
}

CruisePowers cruise_powers(double hover_power_w, const EmpiricalCoeffs& coeffs) {
  if (hover_power_w < 0.0) throw InputError("cruise_powers: hover power must be >= 0");
  return {coeffs.power_ratio_endurance * hover_power_w, coeffs.power_ratio_range * hover_power_w};
}

CruisePowers cruise_power_sd(double hover_power_w, const EmpiricalCoeffs& coeffs) {
  return {coeffs.power_ratio_endurance_sd * hover_power_w,
          coeffs.power_ratio_range_sd * hover_power_w};
}

OptimalSpeeds optimal_speeds(double induced_velocity, double surface_area_cm2,
                             const EmpiricalCoeffs& coeffs) {
  if (!(induced_velocity > 0.0)) throw InputError("optimal_speeds: v_ih must be > 0");
  if (!(surface_area_cm2 > 0.0)) throw InputError("optimal_speeds: surface area must be > 0");
  const double inv_e = coeffs.c0e + coeffs.c1e * induced_velocity + coeffs.c2e * surface_area_cm2;
  const double inv_r = coeffs.c0r + coeffs.c1r * induced_velocity + coeffs.c2r * surface_area_cm2;
  return OptimalSpeeds{
      .endurance = induced_velocity / inv_e,
      .range = induced_velocity / inv_r,
      .inverse_norm_endurance = inv_e,
      .inverse_norm_range = inv_r,
  };
}

}  // namespace mrange
