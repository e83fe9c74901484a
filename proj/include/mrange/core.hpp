#pragma once

// Domain types shared by every model.
//
// Unit conventions used throughout the library:
//   power per cell      P_cell  [W/Ah]   pack power / (cell count * cell capacity)
//   energy per cell     E_cell  [kJ/Ah]  time integral of P_cell, divided by 1000
//   surface area        A       [cm^2]   frontal/top reference area of the airframe
// E_cell in kJ/Ah is the scale under which the built-in open-circuit polynomial
// reproduces published LiPo discharge curves; callers must not pass Wh/Ah or J/Ah.

#include <string>
#include <string_view>

namespace mrange {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultAirDensity = 1.2;   // kg/m^3
inline constexpr double kStandardGravity = 9.81;    // m/s^2
inline constexpr double kNominalCellVoltage = 3.7;  // V, used by the endurance shortcut
inline constexpr double kDefaultCutoffVoltage = 3.5;
inline constexpr double kFullCellVoltage = 4.2;
inline constexpr double kDefaultFigureOfMerit = 0.6;
inline constexpr double kDefaultMotorEfficiency = 0.75;

class Environment {
 public:
  Environment(double air_density, double gravity);

  double air_density() const { return air_density_; }
  double gravity() const { return gravity_; }

 private:
  double air_density_;
  double gravity_;
};

Environment default_environment();

// N_S cells in series, N_P strings in parallel.
class BatteryPack {
 public:
  BatteryPack(int series_count, int parallel_count, double pack_capacity_ah,
              double cutoff_voltage_per_cell = kDefaultCutoffVoltage,
              double nominal_cell_voltage = kNominalCellVoltage);

  // Parses "4S", "4S1P", "6s2p".
  static BatteryPack from_designator(std::string_view designator, double pack_capacity_ah,
                                     double cutoff_voltage_per_cell = kDefaultCutoffVoltage);

  int series_count() const { return series_; }
  int parallel_count() const { return parallel_; }
  int cell_count() const { return series_ * parallel_; }
  double pack_capacity_ah() const { return capacity_ah_; }
  double cell_capacity_ah() const { return capacity_ah_ / parallel_; }
  double cutoff_voltage_per_cell() const { return cutoff_; }
  double nominal_cell_voltage() const { return nominal_; }

  // Nominal energy at nominal cell voltage [Wh].
  double nominal_energy_wh() const { return capacity_ah_ * nominal_ * series_; }
  std::string designator() const;

  BatteryPack with_capacity(double pack_capacity_ah) const;

 private:
  int series_;
  int parallel_;
  double capacity_ah_;
  double cutoff_;
  double nominal_;
};

struct VehicleFields {
  double mass_kg;
  int rotor_count;
  double propeller_radius_m;
  double surface_area_cm2;
  BatteryPack pack;
  double propeller_figure_of_merit = kDefaultFigureOfMerit;
  double motor_efficiency = kDefaultMotorEfficiency;
};

class VehicleSpec {
 public:
  explicit VehicleSpec(const VehicleFields& fields);

  double mass_kg() const { return f_.mass_kg; }
  int rotor_count() const { return f_.rotor_count; }
  double propeller_radius_m() const { return f_.propeller_radius_m; }
  double surface_area_cm2() const { return f_.surface_area_cm2; }
  const BatteryPack& pack() const { return f_.pack; }
  double propeller_figure_of_merit() const { return f_.propeller_figure_of_merit; }
  double motor_efficiency() const { return f_.motor_efficiency; }
  const VehicleFields& fields() const { return f_; }

  VehicleSpec with_mass(double mass_kg) const;
  VehicleSpec with_capacity(double pack_capacity_ah) const;
  VehicleSpec with_surface_area(double surface_area_cm2) const;

 private:
  VehicleFields f_;
};

// OTC battery model coefficients. Open-circuit polynomial in E_cell [kJ/Ah],
// internal resistance model in P_cell [W/Ah] and C_cell [Ah].
struct BatteryParams {
  double a0;
  double a1;
  double a2;
  double a3;
  double b0;
  double b1;
  double b2;
  double r_min;   // Ohm
  double tau_rc;  // s
  double k;       // V per W/Ah

  void validate() const;
};

// Fitted shortcut coefficients for the pen-and-paper estimator.
struct EmpiricalCoeffs {
  double power_ratio_range;
  double power_ratio_range_sd;
  double power_ratio_endurance;
  double power_ratio_endurance_sd;
  double c0e, c1e, c2e;
  double c0r, c1r, c2r;
  double d0, d1, d2, d3;

  void validate() const;
};

BatteryParams builtin_battery_params();
EmpiricalCoeffs builtin_empirical_coeffs();

}  // namespace mrange
