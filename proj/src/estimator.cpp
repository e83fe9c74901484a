#include "mrange/estimator.hpp"

#include <cmath>

#include "mrange/errors.hpp"

namespace mrange {

double flight_time(double c_eff_ah, const BatteryPack& pack, double p_mot_w) {
  return c_eff_ah * pack.nominal_cell_voltage() * pack.series_count() * 3600.0 / p_mot_w;
}

namespace {

double motor_eta(const VehicleSpec& spec, const EstimateOptions& options, double mech_power) {
  if (!options.motor_model) return spec.motor_efficiency();
  const double omega = omega_for_mech_power(*options.motor_model, mech_power / spec.rotor_count());
  return efficiency(*options.motor_model, omega);
}

// Long enough for any feasible load to reach the cutoff.
constexpr double kFullBatteryHorizon = 1.0e6;

double simulate_to_cutoff(const BatteryPack& pack, const BatteryParams& params, double p_mot,
                          const DischargeOptions& discharge, double* kappa) {
  const auto trace =
      simulate_discharge(pack, params, PowerProfile::constant(p_mot, kFullBatteryHorizon), discharge);
  if (trace.termination == Termination::infeasible_power)
    throw InfeasiblePower(trace.infeasible_request, trace.max_deliverable, trace.infeasible_time);
  *kappa = effective_capacity(trace, pack).kappa;
  return trace.last().time;
}

}  // namespace

PerformanceReport estimate(const VehicleSpec& spec, const Environment& env,
                           const EmpiricalCoeffs& coeffs, const BatteryParams& params,
                           const EstimateOptions& options) {
  PerformanceReport r{};
  const BatteryPack& pack = spec.pack();

  // 1. hover
  const HoverPoint hover = hover_point(spec, env);
  r.v_ih = hover.induced_velocity;
  if (options.injected_hover_power) {
    if (!(*options.injected_hover_power > 0.0))
      throw InputError("estimate: injected hover power must be > 0");
    r.p_h = *options.injected_hover_power;
    r.hover_source = HoverPowerSource::injected;
  } else {
    r.p_h = hover.hover_power_mech;
    r.hover_source = HoverPowerSource::computed;
  }

  // 2. cruise powers
  const CruisePowers cruise = cruise_powers(r.p_h, coeffs);
  const CruisePowers sd = cruise_power_sd(r.p_h, coeffs);
  r.p_e = cruise.endurance;
  r.p_r = cruise.range;
  r.p_e_sd = sd.endurance;
  r.p_r_sd = sd.range;

  // 3. electrical power
  r.motor_mode = options.motor_model ? MotorMode::fitted_model : MotorMode::constant_efficiency;
  r.eta_e = motor_eta(spec, options, r.p_e);
  r.eta_r = motor_eta(spec, options, r.p_r);
  r.p_mot_e = electrical_power_from_mech(r.p_e, r.eta_e);
  r.p_mot_r = electrical_power_from_mech(r.p_r, r.eta_r);

  // 4. per-cell power
  r.p_cell_e = normalize_power(r.p_mot_e, pack);
  r.p_cell_r = normalize_power(r.p_mot_r, pack);

  // 5. effective capacity
  const CubicCapacity cap_e = relative_capacity_cubic(coeffs, r.p_cell_e);
  const CubicCapacity cap_r = relative_capacity_cubic(coeffs, r.p_cell_r);
  r.kappa_e = cap_e.kappa;
  r.kappa_r = cap_r.kappa;
  r.cubic_out_of_domain = cap_e.out_of_domain || cap_r.out_of_domain;
  r.c_eff_e = r.kappa_e * pack.pack_capacity_ah();
  r.c_eff_r = r.kappa_r * pack.pack_capacity_ah();

  // 6. flight times
  r.t_e = flight_time(r.c_eff_e, pack, r.p_mot_e);
  r.t_r = flight_time(r.c_eff_r, pack, r.p_mot_r);

  // 7. optimal speeds
  const OptimalSpeeds speeds = optimal_speeds(r.v_ih, spec.surface_area_cm2(), coeffs);
  r.v_e = speeds.endurance;
  r.v_r = speeds.range;

  // 8. range
  r.x_r = r.t_r * r.v_r;

  r.battery_path = options.full_battery ? BatteryPath::cubic_and_full : BatteryPath::cubic;
  if (options.full_battery) {
    FullBatteryResult full{};
    full.time_endurance =
        simulate_to_cutoff(pack, params, r.p_mot_e, options.discharge, &full.kappa_endurance);
    full.time_range = simulate_to_cutoff(pack, params, r.p_mot_r, options.discharge, &full.kappa_range);
    r.full = full;
  }
  return r;
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "mass") return SweepParameter::mass;
  if (name == "capacity") return SweepParameter::capacity;
  if (name == "surface_area") return SweepParameter::surface_area;
  throw InputError("unknown sweep parameter '" + name + "' (expected mass, capacity, surface_area)");
}

VehicleSpec instantiate(const VehicleSpec& base, SweepParameter parameter, double value) {
  switch (parameter) {
    case SweepParameter::mass:
      return base.with_mass(value);
    case SweepParameter::capacity:
      return base.with_capacity(value);
    case SweepParameter::surface_area:
      return base.with_surface_area(value);
  }
  throw InputError("unknown sweep parameter");
}

namespace {

SweepPoint sweep_point(const SweepInputs& in, SweepParameter parameter, double value) {
  SweepPoint p{value, std::nullopt, {}};
  try {
    p.report = estimate(instantiate(in.base, parameter, value), in.env, in.coeffs, in.params,
                        in.options);
  } catch (const std::exception& e) {
    p.error = e.what();
  }
  return p;
}

}  // namespace

std::vector<SweepPoint> sweep_serial(const SweepInputs& in, SweepParameter parameter,
                                     const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("sweep: empty grid");
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (double v : grid) out.push_back(sweep_point(in, parameter, v));
  return out;
}

std::vector<SweepPoint> sweep(const SweepInputs& in, SweepParameter parameter,
                              const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("sweep: empty grid");
  std::vector<SweepPoint> out(grid.size(), SweepPoint{0.0, std::nullopt, {}});
  const auto n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = sweep_point(in, parameter, grid[idx]);
  }
  return out;
}

}  // namespace mrange
