#pragma once

#include "mrange/core.hpp"

namespace mrange {

struct HoverPoint {
  double induced_velocity;  // v_ih [m/s]
  double hover_power_mech;  // P_h [W], all rotors, including figure of merit
  double per_rotor_thrust;  // T_h [N]
};

struct CruisePowers {
  double endurance;  // P_e [W]
  double range;      // P_r [W]
};

struct OptimalSpeeds {
  double endurance;              // v_e [m/s]
  double range;                  // v_r [m/s]
  double inverse_norm_endurance;  // v_ih / v_e
  double inverse_norm_range;      // v_ih / v_r
};

// Momentum-theory kernels on raw quantities. A zero weight is allowed here
// (zero-thrust limit) even though VehicleSpec rejects zero mass.
double induced_velocity_hover(double weight_n, double air_density, double propeller_radius_m,
                              int rotor_count);
double hover_power_mech(double weight_n, double air_density, double propeller_radius_m,
                        int rotor_count, double figure_of_merit);

HoverPoint hover_point(const VehicleSpec& spec, const Environment& env);

// Cruise powers as fixed ratios of hover power; ratios straddle 1, so P_e < P_h < P_r.
CruisePowers cruise_powers(double hover_power_w, const EmpiricalCoeffs& coeffs);

// Spread of the cruise powers implied by the ratio standard deviations. Reporting only.
CruisePowers cruise_power_sd(double hover_power_w, const EmpiricalCoeffs& coeffs);

// v_x = v_ih / (c0x + c1x * v_ih + c2x * A), A in cm^2.
OptimalSpeeds optimal_speeds(double induced_velocity, double surface_area_cm2,
                             const EmpiricalCoeffs& coeffs);

}  // namespace mrange
