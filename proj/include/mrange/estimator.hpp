#pragma once

// Pen-and-paper range / endurance / optimal-speed estimate:
//   hover point -> cruise powers -> electrical power -> per-cell power
//   -> effective capacity -> flight times -> optimal speeds -> range.

#include <optional>
#include <string>
#include <vector>

#include "mrange/aero.hpp"
#include "mrange/battery.hpp"
#include "mrange/core.hpp"
#include "mrange/motor.hpp"

namespace mrange {

enum class HoverPowerSource { computed, injected };
enum class BatteryPath { cubic, cubic_and_full };
enum class MotorMode { constant_efficiency, fitted_model };

struct EstimateOptions {
  std::optional<double> injected_hover_power;  // W, replaces the momentum-theory value
  bool full_battery = false;  // also simulate constant electrical power to cutoff
  DischargeOptions discharge{};
  // Fitted motor model; when set, efficiency comes from the lumped model at the
  // rotor speed where the propeller absorbs the per-rotor mechanical power.
  std::optional<MotorPropCoeffs> motor_model;
};

struct FullBatteryResult {
  double time_endurance;  // s, simulated to cutoff
  double time_range;      // s
  double kappa_endurance;
  double kappa_range;
};

struct PerformanceReport {
  double v_ih;
  double p_h;
  double p_e;
  double p_r;
  double p_e_sd;
  double p_r_sd;
  double eta_e;  // motor efficiency applied
  double eta_r;
  double p_mot_e;
  double p_mot_r;
  double p_cell_e;
  double p_cell_r;
  double kappa_e;
  double kappa_r;
  double c_eff_e;  // Ah
  double c_eff_r;
  double t_e;  // s
  double t_r;
  double v_e;  // m/s
  double v_r;
  double x_r;  // m
  HoverPowerSource hover_source;
  BatteryPath battery_path;
  MotorMode motor_mode;
  bool cubic_out_of_domain;
  std::optional<FullBatteryResult> full;
};

// Endurance shortcut: C_eff * V_nominal * N_S * 3600 / P_mot.
double flight_time(double c_eff_ah, const BatteryPack& pack, double p_mot_w);

// Throws InfeasiblePower when the full battery path cannot deliver the demand.
PerformanceReport estimate(const VehicleSpec& spec, const Environment& env,
                           const EmpiricalCoeffs& coeffs, const BatteryParams& params,
                           const EstimateOptions& options = {});

enum class SweepParameter { mass, capacity, surface_area };

SweepParameter parse_sweep_parameter(const std::string& name);
VehicleSpec instantiate(const VehicleSpec& base, SweepParameter parameter, double value);

struct SweepPoint {
  double value;
  std::optional<PerformanceReport> report;
  std::string error;  // set when report is empty
};

struct SweepInputs {
  VehicleSpec base;
  Environment env;
  EmpiricalCoeffs coeffs;
  BatteryParams params;
  EstimateOptions options;
};

// One point per grid value, in grid order; failures are recorded per point.
std::vector<SweepPoint> sweep(const SweepInputs& in, SweepParameter parameter,
                              const std::vector<double>& grid);
std::vector<SweepPoint> sweep_serial(const SweepInputs& in, SweepParameter parameter,
                                     const std::vector<double>& grid);

}  // namespace mrange
