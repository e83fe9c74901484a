#pragma once

// Effective capacity against constant pack power: full OTC simulation next to
// the cubic shortcut, one independent discharge per grid point.

#include <string>
#include <vector>

#include "mrange/battery.hpp"
#include "mrange/core.hpp"

namespace mrange {

struct CapacityPoint {
  double pack_power;     // W
  double p_cell;         // W/Ah
  double endpoint_time;  // s, time of the last simulated sample
  double effective_wh;   // NaN unless the discharge reached cutoff
  double kappa_full;     // NaN unless the discharge reached cutoff
  double kappa_cubic;
  bool cubic_out_of_domain;
  Termination termination;
};

// Horizon given to each constant-power discharge.
inline constexpr double kCapacityHorizon = 1.0e6;

std::vector<CapacityPoint> capacity_sweep(const BatteryPack& pack, const BatteryParams& params,
                                          const EmpiricalCoeffs& coeffs,
                                          const std::vector<double>& pack_powers,
                                          const DischargeOptions& options = {});

// Reference implementation; must match capacity_sweep exactly.
std::vector<CapacityPoint> capacity_sweep_serial(const BatteryPack& pack,
                                                 const BatteryParams& params,
                                                 const EmpiricalCoeffs& coeffs,
                                                 const std::vector<double>& pack_powers,
                                                 const DischargeOptions& options = {});

CapacityPoint capacity_point(const BatteryPack& pack, const BatteryParams& params,
                             const EmpiricalCoeffs& coeffs, double pack_power,
                             const DischargeOptions& options = {});

}  // namespace mrange
