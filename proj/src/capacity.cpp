#include "mrange/capacity.hpp"

#include <limits>

#include "mrange/errors.hpp"

namespace mrange {

CapacityPoint capacity_point(const BatteryPack& pack, const BatteryParams& params,
                             const EmpiricalCoeffs& coeffs, double pack_power,
                             const DischargeOptions& options) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const double p_cell = normalize_power(pack_power, pack);
  const CubicCapacity cubic = relative_capacity_cubic(coeffs, p_cell);
  CapacityPoint pt{pack_power, p_cell, 0.0, nan, nan, cubic.kappa, cubic.out_of_domain,
                   Termination::profile_end};
  if (pack_power == 0.0) return pt;  // never reaches cutoff

  const auto trace =
      simulate_discharge(pack, params, PowerProfile::constant(pack_power, kCapacityHorizon), options);
  pt.termination = trace.termination;
  pt.endpoint_time = trace.samples.empty() ? 0.0 : trace.last().time;
  if (trace.termination == Termination::reached_cutoff) {
    const auto cap = effective_capacity(trace, pack);
    pt.effective_wh = cap.wh;
    pt.kappa_full = cap.kappa;
  }
  return pt;
}

std::vector<CapacityPoint> capacity_sweep_serial(const BatteryPack& pack,
                                                 const BatteryParams& params,
                                                 const EmpiricalCoeffs& coeffs,
                                                 const std::vector<double>& pack_powers,
                                                 const DischargeOptions& options) {
  if (pack_powers.empty()) throw InputError("capacity sweep: empty power grid");
  std::vector<CapacityPoint> out;
  out.reserve(pack_powers.size());
  for (double p : pack_powers) out.push_back(capacity_point(pack, params, coeffs, p, options));
  return out;
}

std::vector<CapacityPoint> capacity_sweep(const BatteryPack& pack, const BatteryParams& params,
                                          const EmpiricalCoeffs& coeffs,
                                          const std::vector<double>& pack_powers,
                                          const DischargeOptions& options) {
  if (pack_powers.empty()) throw InputError("capacity sweep: empty power grid");
  for (double p : pack_powers)
    if (!(p >= 0.0)) throw InputError("capacity sweep: power must be >= 0");
  params.validate();
  std::vector<CapacityPoint> out(pack_powers.size());
  const auto n = static_cast<long>(pack_powers.size());
  // Low powers take far longer to discharge, so hand out points dynamically.
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = capacity_point(pack, params, coeffs, pack_powers[idx], options);
  }
  return out;
}

}  // namespace mrange
