#include "mrange/battery.hpp"

#include <algorithm>
#include <cmath>

#include "mrange/errors.hpp"

namespace mrange {

namespace {

// Step boundaries closer than this are treated as coincident.
constexpr double kTimeEps = 1e-9;

}  // namespace

PowerProfile::PowerProfile(std::vector<Segment> segments, double end_time_s)
    : segments_(std::move(segments)), end_time_(end_time_s) {}

PowerProfile PowerProfile::constant(double pack_power_w, double duration_s) {
  return piecewise({{0.0, pack_power_w}}, duration_s);
}

PowerProfile PowerProfile::piecewise(std::vector<Segment> segments, double end_time_s) {
  if (segments.empty()) throw InputError("power profile: no segments");
  if (segments.front().start_time != 0.0)
    throw InputError("power profile: first segment must start at t = 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].power >= 0.0) || !std::isfinite(segments[i].power))
      throw InputError("power profile: power must be finite and >= 0");
    if (i > 0 && !(segments[i].start_time > segments[i - 1].start_time))
      throw InputError("power profile: segment start times must be strictly increasing");
  }
  if (!(end_time_s > segments.back().start_time) || !std::isfinite(end_time_s))
    throw InputError("power profile: end time must follow the last segment start");
  return PowerProfile(std::move(segments), end_time_s);
}

double PowerProfile::power_at(double time_s) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), time_s + kTimeEps,
                             [](double t, const Segment& s) { return t < s.start_time; });
  return std::prev(it)->power;
}

double PowerProfile::next_change_after(double time_s) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), time_s + kTimeEps,
                             [](double t, const Segment& s) { return t < s.start_time; });
  return it == segments_.end() ? end_time_ : it->start_time;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached_cutoff:
      return "reached_cutoff";
    case Termination::infeasible_power:
      return "infeasible_power";
    case Termination::profile_end:
      return "profile_end";
  }
  return "unknown";
}

std::vector<TraceSample> DischargeTrace::decimated(std::size_t max_rows) const {
  const std::size_t n = samples.size();
  if (n <= max_rows || max_rows < 2) return samples;
  std::vector<TraceSample> out;
  out.reserve(max_rows);
  for (std::size_t i = 0; i < max_rows; ++i) {
    const std::size_t idx = (i * (n - 1) + (max_rows - 1) / 2) / (max_rows - 1);
    out.push_back(samples[idx]);
  }
  return out;
}

double normalize_power(double pack_power_w, const BatteryPack& pack) {
  if (pack_power_w < 0.0) throw InputError("normalize_power: power must be >= 0");
  return pack_power_w / (pack.cell_count() * pack.cell_capacity_ah());
}

double open_circuit_voltage(const BatteryParams& p, double e) {
  return p.a0 + e * (p.a1 + e * (p.a2 + e * p.a3));
}

double internal_resistance(const BatteryParams& p, double avg_power, double cell_capacity_ah) {
  return std::max(p.b0 + p.b1 * avg_power + p.b2 * cell_capacity_ah, p.r_min);
}

double cell_terminal_voltage(double open_circuit_v, double rc_voltage, double r0, double p_cell) {
  const double source = open_circuit_v - rc_voltage;
  const double disc = source * source - 4.0 * r0 * p_cell;
  if (disc < 0.0) throw InfeasiblePower(p_cell, source * source / (4.0 * r0));
  return 0.5 * (source + std::sqrt(disc));
}

double resistance_power(const BatteryState& state, double p_cell) {
  return state.time > 0.0 ? state.avg_power : p_cell;
}

BatteryState advance_state(const BatteryState& s, double p_cell, double dt,
                           const BatteryParams& params) {
  const double target = params.k * p_cell;
  const auto rate = [&](double u) { return (target - u) / params.tau_rc; };
  const double k1 = rate(s.rc_voltage);
  const double k2 = rate(s.rc_voltage + 0.5 * dt * k1);
  const double k3 = rate(s.rc_voltage + 0.5 * dt * k2);
  const double k4 = rate(s.rc_voltage + dt * k3);

  BatteryState next;
  next.time = s.time + dt;
  next.rc_voltage = s.rc_voltage + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  next.energy_per_cell = s.energy_per_cell + p_cell * dt / 1000.0;
  next.avg_power = next.energy_per_cell * 1000.0 / next.time;
  return next;
}

double cell_voltage(const BatteryState& state, double p_cell, double cell_capacity_ah,
                    const BatteryParams& params) {
  const double u0 = open_circuit_voltage(params, state.energy_per_cell);
  const double r0 =
      internal_resistance(params, resistance_power(state, p_cell), cell_capacity_ah);
  return cell_terminal_voltage(u0, state.rc_voltage, r0, p_cell);
}

DischargeTrace simulate_discharge(const BatteryPack& pack, const BatteryParams& params,
                                  const PowerProfile& profile, const DischargeOptions& options) {
  params.validate();
  if (!(options.dt > 0.0)) throw InputError("simulate_discharge: dt must be > 0");
  const double cutoff =
      options.cutoff_per_cell > 0.0 ? options.cutoff_per_cell : pack.cutoff_voltage_per_cell();
  const double norm = pack.cell_count() * pack.cell_capacity_ah();
  const double c_cell = pack.cell_capacity_ah();
  const double end = profile.end_time();

  DischargeTrace trace;
  trace.samples.reserve(static_cast<std::size_t>(std::min(end / options.dt, 2.0e5)) + 2);

  BatteryState state;
  for (;;) {
    const double p_cell = profile.power_at(state.time) / norm;
    double u_cell = 0.0;
    try {
      u_cell = cell_voltage(state, p_cell, c_cell, params);
    } catch (const InfeasiblePower& e) {
      trace.termination = Termination::infeasible_power;
      trace.infeasible_time = state.time;
      trace.infeasible_request = p_cell;
      trace.max_deliverable = e.max_deliverable;
      break;
    }
    trace.samples.push_back({state.time, p_cell, state.energy_per_cell, u_cell,
                             u_cell * pack.series_count()});
    if (u_cell < cutoff) {
      trace.termination = Termination::reached_cutoff;
      break;
    }
    if (state.time >= end - kTimeEps) {
      trace.termination = Termination::profile_end;
      break;
    }
    const double boundary = profile.next_change_after(state.time);
    const double h = std::min(options.dt, boundary - state.time);
    state = advance_state(state, p_cell, h, params);
    // Snap onto the boundary to avoid sliver steps from accumulated rounding.
    if (std::abs(state.time - boundary) < kTimeEps) state.time = boundary;
  }
  return trace;
}

EffectiveCapacity effective_capacity(const DischargeTrace& trace, const BatteryPack& pack) {
  if (trace.termination != Termination::reached_cutoff || trace.samples.empty())
    throw UndefinedCapacity(std::string("effective capacity undefined: trace ended with ") +
                            to_string(trace.termination));
  // mean pack power * elapsed time == E_cell * N_cell * C_cell (E_cell in kJ/Ah)
  const double wh =
      trace.last().e_cell * 1000.0 * pack.cell_count() * pack.cell_capacity_ah() / 3600.0;
  const double ah = wh / (pack.nominal_cell_voltage() * pack.series_count());
  return {wh, ah, ah / pack.pack_capacity_ah()};
}

CubicCapacity relative_capacity_cubic(const EmpiricalCoeffs& c, double p_cell) {
  const double kappa = c.d0 + p_cell * (c.d1 + p_cell * (c.d2 + p_cell * c.d3));
  return {kappa, p_cell < 0.0 || p_cell > kCubicDomainMax};
}

}  // namespace mrange
