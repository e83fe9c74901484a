#pragma once

// Graybox identification of the motor and battery models from bench logs.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mrange/battery.hpp"
#include "mrange/core.hpp"
#include "mrange/motor.hpp"

namespace mrange {

struct FitReport {
  std::vector<std::pair<std::string, double>> coefficients;
  double rmse = 0.0;  // in units of the fitted signal
  std::vector<double> residuals;
  std::vector<std::string> warnings;
  int iterations = 0;
};

double rmse_of(const std::vector<double>& residuals);

// ---- motor ------------------------------------------------------------------

struct ThrustSample {
  double omega;   // rad/s
  double thrust;  // N
  double torque;  // N m
  double power;   // W, electrical
};

struct ThrustLog {
  std::vector<ThrustSample> rows;
};

inline constexpr std::size_t kMinThrustRows = 8;

struct MotorFit {
  MotorPropCoeffs coeffs;
  FitReport report;  // residuals on electrical power
  double torque_rmse = 0.0;
};

// Two linear stages: c_d from Q = c_d w^2, then (m0, m1, m2) from
// P = m0 w + m1 w^3 + m2 w^6. Negative loss terms are dropped and the rest refit.
MotorFit fit_motor(const ThrustLog& log);

// ---- battery ----------------------------------------------------------------

struct DischargeSample {
  double time;          // s
  double pack_power;    // W
  double pack_voltage;  // V
};

inline constexpr double kStepThreshold = 0.10;

struct DischargeLog {
  BatteryPack pack;
  std::vector<DischargeSample> rows;
  std::vector<std::size_t> step_indices;  // first row after each power step
};

// Rows where |P_i - P_{i-1}| > threshold * P_{i-1} (any rise from zero counts).
std::vector<std::size_t> detect_steps(const std::vector<DischargeSample>& rows,
                                      double threshold = kStepThreshold);

// Validates ordering and values, then annotates the steps.
DischargeLog make_discharge_log(const BatteryPack& pack, std::vector<DischargeSample> rows);

struct StepResistance {
  std::size_t log_index;
  std::size_t row_index;
  double time;
  double avg_power;      // W/Ah, running mean up to the step
  double cell_capacity;  // Ah
  double resistance;     // Ohm, normalised like R0 (per cell, per Ah)
};

// R = -dU / dI across each step, with U per cell and I the per-cell current per Ah
// of cell capacity, read one sample before and the first sample after the step.
std::vector<StepResistance> extract_step_resistances(const DischargeLog& log, std::size_t log_index,
                                                     std::vector<std::string>& warnings);

struct ResistanceFit {
  double b0;
  double b1;
  double b2;
  double r_min;
  std::vector<StepResistance> steps;
  FitReport report;  // residuals of the R regression
};

inline constexpr double kResistanceFloor = 1e-3;

ResistanceFit fit_battery_resistance(const std::vector<DischargeLog>& logs);

// Cell-voltage prediction for every log row, advancing the state between rows
// with substeps no longer than max_dt. Throws InfeasiblePower.
std::vector<double> replay_log(const DischargeLog& log, const BatteryParams& params,
                               double max_dt = 0.05);

struct DynamicsFitOptions {
  int max_iterations = 500;
  double relative_tolerance = 1e-8;
  double max_dt = 0.05;
  // Overrides the default start (built-in values) when set.
  bool use_initial_guess = false;
  BatteryParams initial_guess{};
};

struct DynamicsFit {
  BatteryParams params;
  FitReport report;  // residuals on per-cell voltage [V]
  std::vector<double> objective_history;  // RMSE after each accepted iteration
};

DynamicsFit fit_battery_dynamics(const std::vector<DischargeLog>& logs,
                                 const ResistanceFit& resistance,
                                 const DynamicsFitOptions& options = {});

// Per-cell voltage residuals (predicted - measured) over all logs, concatenated
// in log order. The parallel and serial versions must agree bit for bit.
std::vector<double> voltage_residuals(const std::vector<DischargeLog>& logs,
                                      const BatteryParams& params, double max_dt);
std::vector<double> voltage_residuals_serial(const std::vector<DischargeLog>& logs,
                                             const BatteryParams& params, double max_dt);

}  // namespace mrange
