#pragma once

// One-time-constant (OTC) Thevenin battery model, normalised to a single cell
// per Ah of capacity so one coefficient set covers any NSxP pack.

#include <cstddef>
#include <limits>
#include <vector>

#include "mrange/core.hpp"

namespace mrange {

struct BatteryState {
  double time = 0.0;             // s
  double energy_per_cell = 0.0;  // kJ/Ah
  double rc_voltage = 0.0;       // V
  double avg_power = 0.0;        // W/Ah, running mean E_cell / t
};

// Piecewise-constant pack power demand. Each segment holds from its start time
// until the next segment starts; the last one holds until end_time.
class PowerProfile {
 public:
  struct Segment {
    double start_time;  // s
    double power;       // W (pack level)
  };

  static PowerProfile constant(double pack_power_w, double duration_s);
  static PowerProfile piecewise(std::vector<Segment> segments, double end_time_s);

  double power_at(double time_s) const;
  // Start of the next segment strictly after time_s, or end_time().
  double next_change_after(double time_s) const;
  double end_time() const { return end_time_; }
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  PowerProfile(std::vector<Segment> segments, double end_time_s);

  std::vector<Segment> segments_;
  double end_time_;
};

enum class Termination { reached_cutoff, infeasible_power, profile_end };

const char* to_string(Termination t);

struct TraceSample {
  double time;    // s
  double p_cell;  // W/Ah
  double e_cell;  // kJ/Ah
  double u_cell;  // V
  double u_pack;  // V
};

struct DischargeTrace {
  std::vector<TraceSample> samples;
  Termination termination = Termination::profile_end;
  // Set when termination == infeasible_power.
  double infeasible_time = std::numeric_limits<double>::quiet_NaN();
  double infeasible_request = std::numeric_limits<double>::quiet_NaN();
  double max_deliverable = std::numeric_limits<double>::quiet_NaN();

  const TraceSample& last() const { return samples.back(); }
  // Uniformly thinned copy with at most max_rows rows; first and last rows kept.
  std::vector<TraceSample> decimated(std::size_t max_rows = 2000) const;
};

struct DischargeOptions {
  double dt = 0.05;  // s
  // Per-cell cutoff; <= 0 means use the pack's own cutoff.
  double cutoff_per_cell = 0.0;
};

struct EffectiveCapacity {
  double wh;
  double ah;     // referenced to nominal cell voltage
  double kappa;  // ah / pack capacity
};

struct CubicCapacity {
  double kappa;
  bool out_of_domain;  // input outside the [0, 100] W/Ah fit range
};

inline constexpr double kCubicDomainMax = 100.0;

double normalize_power(double pack_power_w, const BatteryPack& pack);

double open_circuit_voltage(const BatteryParams& params, double energy_per_cell);

// R0 = max(b0 + b1 * P_avg + b2 * C_cell, r_min)
double internal_resistance(const BatteryParams& params, double avg_power, double cell_capacity_ah);

// Larger root of U^2 - (U0 - U_cap) U + R0 P = 0. Throws InfeasiblePower when the
// discriminant is negative; the exception carries P_max = (U0 - U_cap)^2 / (4 R0).
double cell_terminal_voltage(double open_circuit_v, double rc_voltage, double r0, double p_cell);

// Running mean used for R0; at t = 0 the instantaneous power stands in for 0/0.
double resistance_power(const BatteryState& state, double p_cell);

// One fixed RK4 step of dU_cap/dt = (k P - U_cap) / tau with P held over the step.
BatteryState advance_state(const BatteryState& state, double p_cell, double dt,
                           const BatteryParams& params);

// Terminal cell voltage for a given state and instantaneous load.
double cell_voltage(const BatteryState& state, double p_cell, double cell_capacity_ah,
                    const BatteryParams& params);

DischargeTrace simulate_discharge(const BatteryPack& pack, const BatteryParams& params,
                                  const PowerProfile& profile, const DischargeOptions& options = {});

// Throws UndefinedCapacity unless the trace ended at the cutoff voltage.
EffectiveCapacity effective_capacity(const DischargeTrace& trace, const BatteryPack& pack);

CubicCapacity relative_capacity_cubic(const EmpiricalCoeffs& coeffs, double p_cell);

}  // namespace mrange
