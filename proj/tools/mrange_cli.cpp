// mrange: multirotor range / endurance estimation and battery/motor model tools.
//
// Exit codes: 0 success, 2 input or parse error, 3 infeasible model condition,
// 4 fit failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mrange/aero.hpp"
#include "mrange/battery.hpp"
#include "mrange/capacity.hpp"
#include "mrange/core.hpp"
#include "mrange/errors.hpp"
#include "mrange/estimator.hpp"
#include "mrange/fixtures.hpp"
#include "mrange/identification.hpp"
#include "mrange/io.hpp"
#include "mrange/motor.hpp"

namespace fs = std::filesystem;
using namespace mrange;

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kInfeasible = 3, kFitFailure = 4 };

// Error that maps straight to an exit code after its message is printed.
struct CommandFailure {
  int code;
  std::string message;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

// "a:b:n" -> n evenly spaced values from a to b; otherwise a comma list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    double a = 0.0, b = 0.0;
    int n = 0;
    try {
      a = std::stod(text.substr(0, c1));
      b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
      n = std::stoi(text.substr(c2 + 1));
    } catch (const std::exception&) {
      throw InputError("grid '" + text + "': expected start:stop:count");
    }
    if (n < 1) throw InputError("grid '" + text + "': count must be >= 1");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InputError("grid '" + text + "': bad value '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("grid is empty");
  return out;
}

struct PackFlags {
  std::string battery;
  double capacity_ah = 0.0;
  double cutoff = kDefaultCutoffVoltage;

  void add_to(CLI::App* cmd, bool required) {
    auto* b = cmd->add_option("--battery", battery, "Pack topology, e.g. 4S1P");
    auto* c = cmd->add_option("--capacity-ah", capacity_ah, "Pack capacity [Ah]");
    if (required) {
      b->required();
      c->required();
    }
    cmd->add_option("--cutoff", cutoff, "Cutoff voltage per cell [V]")->capture_default_str();
  }
  bool given() const { return !battery.empty(); }
  BatteryPack pack() const { return BatteryPack::from_designator(battery, capacity_ah, cutoff); }
};

std::string fmt(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

// ---- estimate ---------------------------------------------------------------

struct EstimateArgs {
  std::string spec_path;
  std::optional<double> rho;
  std::optional<double> inject_hover_power;
  bool full_battery = false;
  double dt = 0.05;
  std::string motor_coeffs;
  std::string output;
  std::string report;
};

MotorPropCoeffs load_motor_coeffs(const std::string& path) {
  std::optional<double> cd, m0, m1, m2;
  for (const auto& [k, v] : io::parse_kv(io::read_file(path))) {
    const double x = std::stod(v);
    if (k == "c_d") cd = x;
    else if (k == "m0") m0 = x;
    else if (k == "m1") m1 = x;
    else if (k == "m2") m2 = x;
  }
  if (!cd || !m0 || !m1 || !m2) throw InputError("motor coefficients file needs c_d, m0, m1, m2");
  MotorPropCoeffs c{*cd, *m0, *m1, *m2};
  c.validate();
  return c;
}

int run_estimate(const EstimateArgs& a) {
  const auto config = io::load_vehicle_spec(a.spec_path);
  const double rho = a.rho.value_or(config.air_density.value_or(kDefaultAirDensity));
  const Environment env(rho, kStandardGravity);
  const auto coeffs = builtin_empirical_coeffs();
  EstimateOptions opt;
  opt.injected_hover_power = a.inject_hover_power;
  opt.full_battery = a.full_battery;
  opt.discharge.dt = a.dt;
  if (!a.motor_coeffs.empty()) opt.motor_model = load_motor_coeffs(a.motor_coeffs);

  const auto& spec = config.spec;
  const auto r = estimate(spec, env, coeffs, builtin_battery_params(), opt);

  std::cout << "vehicle: m=" << io::format_double(spec.mass_kg()) << " kg, N_r=" << spec.rotor_count()
            << ", r_prop=" << io::format_double(spec.propeller_radius_m())
            << " m, A=" << io::format_double(spec.surface_area_cm2()) << " cm^2, battery "
            << spec.pack().designator() << " " << io::format_double(spec.pack().pack_capacity_ah())
            << " Ah, rho=" << io::format_double(rho) << " kg/m^3\n";
  std::cout << "step 1  v_ih = sqrt(m g / (2 rho pi r^2 N_r)) = " << fmt(r.v_ih, 3) << " m/s; "
            << "P_h = (m g)^1.5 / (eta_P sqrt(2 rho pi N_r) r) = " << fmt(r.p_h, 2) << " W ("
            << (r.hover_source == HoverPowerSource::injected ? "injected" : "computed") << ")\n";
  std::cout << "step 2  P_e = " << coeffs.power_ratio_endurance << " P_h = " << fmt(r.p_e, 2)
            << " W (+/- " << fmt(r.p_e_sd, 2) << "); P_r = " << coeffs.power_ratio_range
            << " P_h = " << fmt(r.p_r, 2) << " W (+/- " << fmt(r.p_r_sd, 2) << ")\n";
  std::cout << "step 3  P_mot = P / eta_M: P_mot_e = " << fmt(r.p_mot_e, 2) << " W (eta "
            << fmt(r.eta_e, 3) << "), P_mot_r = " << fmt(r.p_mot_r, 2) << " W (eta "
            << fmt(r.eta_r, 3) << ")\n";
  std::cout << "step 4  P_cell = P_mot / (N_cell C_cell): P_cell_e = " << fmt(r.p_cell_e, 3)
            << " W/Ah, P_cell_r = " << fmt(r.p_cell_r, 3) << " W/Ah\n";
  std::cout << "step 5  kappa = d0 + d1 P + d2 P^2 + d3 P^3: C_eff_e = " << fmt(r.c_eff_e, 3)
            << " Ah (kappa " << fmt(r.kappa_e, 4) << "), C_eff_r = " << fmt(r.c_eff_r, 3)
            << " Ah (kappa " << fmt(r.kappa_r, 4) << ")"
            << (r.cubic_out_of_domain ? " [outside 0-100 W/Ah fit range]" : "") << "\n";
  std::cout << "step 6  t = C_eff 3.7 V N_S 3600 / P_mot: t_e = " << fmt(r.t_e, 1)
            << " s, t_r = " << fmt(r.t_r, 1) << " s\n";
  std::cout << "step 7  v = v_ih / (c0 + c1 v_ih + c2 A): v_e = " << fmt(r.v_e, 2)
            << " m/s, v_r = " << fmt(r.v_r, 2) << " m/s\n";
  std::cout << "step 8  x_r = t_r v_r = " << fmt(r.x_r / 1000.0, 2) << " km\n";
  if (r.full) {
    std::cout << "full battery model: t_e = " << fmt(r.full->time_endurance, 1)
              << " s (kappa " << fmt(r.full->kappa_endurance, 4)
              << "), t_r = " << fmt(r.full->time_range, 1) << " s (kappa "
              << fmt(r.full->kappa_range, 4) << ")\n";
  }

  if (!a.output.empty()) {
    auto out = open_output(a.output);
    out << io::report_csv_header() << "\n" << io::report_csv_row(r) << "\n";
  }
  if (!a.report.empty()) {
    auto out = open_output(a.report);
    io::write_report_kv(out, r);
  }
  return kOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::string spec_path;
  std::string parameter = "mass";
  std::string grid;
  std::string output;
};

int run_sweep(const SweepArgs& a) {
  const auto config = io::load_vehicle_spec(a.spec_path);
  const SweepInputs in{config.spec,
                       Environment(config.air_density.value_or(kDefaultAirDensity), kStandardGravity),
                       builtin_empirical_coeffs(), builtin_battery_params(), {}};
  const auto points = sweep(in, parse_sweep_parameter(a.parameter), parse_grid(a.grid));
  const std::string header = io::report_csv_header();
  const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  std::ostringstream csv;
  csv << "value," << header << ",error\n";
  for (const auto& p : points) {
    csv << io::format_double(p.value) << ',';
    if (p.report) {
      csv << io::report_csv_row(*p.report) << ",\n";
    } else {
      csv << std::string(columns, ',') << '"' << p.error << "\"\n";
    }
  }
  if (a.output.empty()) {
    std::cout << csv.str();
  } else {
    open_output(a.output) << csv.str();
    std::cout << "wrote " << points.size() << " rows to " << a.output << "\n";
  }
  return kOk;
}

// ---- discharge ----------------------------------------------------------------

struct DischargeArgs {
  PackFlags pack;
  std::optional<double> power_w;
  std::string profile;
  double dt = 0.05;
  double horizon = 36000.0;
  std::string output;
};

int run_discharge(const DischargeArgs& a) {
  const BatteryPack pack = a.pack.pack();
  if (a.power_w.has_value() == !a.profile.empty())
    throw InputError("discharge: give exactly one of --power-w or --profile");
  const PowerProfile profile = a.power_w ? PowerProfile::constant(*a.power_w, a.horizon)
                                         : io::parse_power_profile(io::read_file(a.profile), a.horizon);
  const auto trace = simulate_discharge(pack, builtin_battery_params(), profile,
                                        {.dt = a.dt, .cutoff_per_cell = a.pack.cutoff});
  if (!a.output.empty()) {
    auto out = open_output(a.output);
    io::write_trace_csv(out, trace);
  }
  std::cout << "termination = " << to_string(trace.termination) << "\n";
  if (!trace.samples.empty()) {
    std::cout << "endpoint_time_s = " << io::format_double(trace.last().time) << "\n"
              << "endpoint_pack_voltage_v = " << io::format_double(trace.last().u_pack) << "\n";
  }
  if (trace.termination == Termination::reached_cutoff) {
    const auto cap = effective_capacity(trace, pack);
    std::cout << "effective_capacity_wh = " << io::format_double(cap.wh) << "\n"
              << "effective_capacity_ah = " << io::format_double(cap.ah) << "\n"
              << "kappa = " << io::format_double(cap.kappa) << "\n";
  } else {
    std::cout << "effective_capacity_wh = undefined\n";
  }
  if (trace.termination == Termination::infeasible_power) {
    std::ostringstream msg;
    msg << "infeasible power at t=" << io::format_double(trace.infeasible_time) << " s: requested "
        << io::format_double(trace.infeasible_request) << " W/Ah, deliverable maximum "
        << io::format_double(trace.max_deliverable) << " W/Ah"
        << (a.output.empty() ? "" : "; partial trace written to " + a.output);
    throw CommandFailure{kInfeasible, msg.str()};
  }
  return kOk;
}

// ---- capacity sweep ---------------------------------------------------------

struct CapacityArgs {
  PackFlags pack;
  std::string grid;
  double dt = 0.05;
  std::string output;
};

int run_capacity_sweep(const CapacityArgs& a) {
  const BatteryPack pack = a.pack.pack();
  const auto points = capacity_sweep(pack, builtin_battery_params(), builtin_empirical_coeffs(),
                                     parse_grid(a.grid), {.dt = a.dt, .cutoff_per_cell = a.pack.cutoff});
  std::ostringstream csv;
  csv << io::capacity_csv_header() << "\n";
  for (const auto& p : points) csv << io::capacity_csv_row(p) << "\n";
  if (a.output.empty()) {
    std::cout << csv.str();
  } else {
    open_output(a.output) << csv.str();
    std::cout << "wrote " << points.size() << " rows to " << a.output << "\n";
  }
  return kOk;
}

// ---- fits -------------------------------------------------------------------

void print_report(const FitReport& rep, const char* unit) {
  for (const auto& [k, v] : rep.coefficients) std::cout << k << " = " << io::format_double(v) << "\n";
  std::cout << "rmse = " << io::format_double(rep.rmse) << " " << unit << "\n";
  if (rep.iterations > 0) std::cout << "iterations = " << rep.iterations << "\n";
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
}

struct FitMotorArgs {
  std::string log;
  std::string output;
};

int run_fit_motor(const FitMotorArgs& a) {
  const auto log = io::parse_thrust_log(io::read_file(a.log));
  const auto fit = fit_motor(log);
  print_report(fit.report, "W");
  std::cout << "torque_rmse = " << io::format_double(fit.torque_rmse) << " N m\n";
  if (!a.output.empty()) {
    auto out = open_output(a.output);
    io::write_kv(out, fit.report.coefficients);
    io::write_kv(out, {{"rmse_w", fit.report.rmse}, {"torque_rmse_nm", fit.torque_rmse}});
  }
  return kOk;
}

struct FitBatteryArgs {
  std::string log_dir;
  PackFlags pack;
  std::string output;
};

int run_fit_battery(const FitBatteryArgs& a) {
  if (!fs::is_directory(a.log_dir)) throw InputError("'" + a.log_dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.log_dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no .csv logs in '" + a.log_dir + "'");

  std::vector<DischargeLog> logs;
  for (const auto& f : files) {
    auto sidecar = f;
    sidecar.replace_extension(".pack");
    std::optional<BatteryPack> pack;
    if (fs::exists(sidecar)) pack = io::parse_pack_kv(io::read_file(sidecar));
    else if (a.pack.given()) pack = a.pack.pack();
    else throw InputError("no pack descriptor for '" + f.string() + "' (add a .pack sidecar or --battery)");
    logs.push_back(io::parse_discharge_log(io::read_file(f), *pack));
  }

  const auto res = fit_battery_resistance(logs);
  std::cout << "stage 1: " << res.steps.size() << " steps from " << logs.size() << " logs\n";
  print_report(res.report, "Ohm");
  const auto dyn = fit_battery_dynamics(logs, res);
  std::cout << "stage 2:\n";
  print_report(dyn.report, "V");
  if (!a.output.empty()) {
    const auto& p = dyn.params;
    auto out = open_output(a.output);
    io::write_kv(out, {{"a0", p.a0},
                       {"a1", p.a1},
                       {"a2", p.a2},
                       {"a3", p.a3},
                       {"b0", p.b0},
                       {"b1", p.b1},
                       {"b2", p.b2},
                       {"r_min", p.r_min},
                       {"tau_rc", p.tau_rc},
                       {"k", p.k},
                       {"resistance_rmse_ohm", res.report.rmse},
                       {"voltage_rmse_v", dyn.report.rmse}});
  }
  return kOk;
}

// ---- synthetic data -----------------------------------------------------------

struct SynthDischargeArgs {
  PackFlags pack;
  std::optional<double> power_w;
  std::string profile;
  double horizon = 36000.0;
  double noise_mv = 0.0;
  std::uint64_t seed = 1;
  int sample_every = 1;
  std::string output;
};

int run_synth_discharge(const SynthDischargeArgs& a) {
  const BatteryPack pack = a.pack.pack();
  if (a.power_w.has_value() == !a.profile.empty())
    throw InputError("synth-discharge: give exactly one of --power-w or --profile");
  const PowerProfile profile = a.power_w ? PowerProfile::constant(*a.power_w, a.horizon)
                                         : io::parse_power_profile(io::read_file(a.profile), a.horizon);
  const auto log = fixtures::generate_synthetic_discharge(
      pack, builtin_battery_params(), profile,
      {.noise_mv = a.noise_mv, .seed = a.seed, .sample_every = a.sample_every});
  auto out = open_output(a.output);
  io::write_discharge_log(out, log);
  std::cout << "wrote " << log.rows.size() << " rows, " << log.step_indices.size() << " steps\n";
  return kOk;
}

struct SynthThrustArgs {
  double c_d = 0.0, m0 = 0.0, m1 = 0.0, m2 = 0.0;
  std::string grid;
  std::string from_efficiency;
  double noise_rel = 0.0;
  std::uint64_t seed = 1;
  std::string output;
};

int run_synth_thrust(const SynthThrustArgs& a) {
  if (!a.from_efficiency.empty()) {
    if (!(a.c_d > 0.0)) throw InputError("synth-thrust: --cd must be > 0");
    const auto points = fixtures::parse_efficiency_points(io::read_file(a.from_efficiency));
    auto out = open_output(a.output);
    io::write_thrust_log(out, fixtures::thrust_log_from_efficiency(points, a.c_d));
    return kOk;
  }
  if (a.grid.empty()) throw InputError("synth-thrust: --omega-grid is required");
  MotorPropCoeffs c{a.c_d, a.m0, a.m1, a.m2};
  c.validate();
  const auto log = fixtures::generate_synthetic_thrust_log(
      c, parse_grid(a.grid), {.power_noise_rel = a.noise_rel, .seed = a.seed});
  auto out = open_output(a.output);
  io::write_thrust_log(out, log);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multirotor range, endurance and battery model toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Range / endurance / optimal speed estimate");
  c_est->add_option("spec", est.spec_path, "Vehicle spec key/value file")->required();
  c_est->add_option("--rho", est.rho, "Air density [kg/m^3] (default 1.2)");
  c_est->add_option("--inject-hover-power", est.inject_hover_power,
                    "Use this mechanical hover power [W] instead of the momentum-theory value");
  c_est->add_flag("--full-battery", est.full_battery,
                  "Also simulate the OTC battery model to cutoff at each operating point");
  c_est->add_option("--dt", est.dt, "Battery simulation step [s]")->capture_default_str();
  c_est->add_option("--motor-coeffs", est.motor_coeffs,
                    "Fitted motor coefficients (c_d, m0, m1, m2) instead of constant efficiency");
  c_est->add_option("--output", est.output, "Write the report as a CSV row");
  c_est->add_option("--report", est.report, "Write the report as key/value text");
  c_est->callback([&] { action = [&] { return run_estimate(est); }; });

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "Estimate over a grid of one vehicle parameter");
  c_sw->add_option("spec", sw.spec_path, "Vehicle spec key/value file")->required();
  c_sw->add_option("--parameter", sw.parameter, "mass | capacity | surface_area")->capture_default_str();
  c_sw->add_option("--grid", sw.grid, "start:stop:count or comma list")->required();
  c_sw->add_option("--output", sw.output, "CSV output path (stdout if omitted)");
  c_sw->callback([&] { action = [&] { return run_sweep(sw); }; });

  DischargeArgs dis;
  auto* c_dis = app.add_subcommand("discharge", "Simulate a battery discharge trace");
  dis.pack.add_to(c_dis, true);
  c_dis->add_option("--power-w", dis.power_w, "Constant pack power [W]");
  c_dis->add_option("--profile", dis.profile, "Piecewise-constant profile CSV (time_s,power_w)");
  c_dis->add_option("--dt", dis.dt, "Integration step [s]")->capture_default_str();
  c_dis->add_option("--horizon-s", dis.horizon, "Profile end time [s]")->capture_default_str();
  c_dis->add_option("--output", dis.output, "Trace CSV output path");
  c_dis->callback([&] { action = [&] { return run_discharge(dis); }; });

  CapacityArgs cap;
  auto* c_cap = app.add_subcommand("capacity-sweep", "Effective capacity against constant pack power");
  cap.pack.add_to(c_cap, true);
  c_cap->add_option("--power-grid", cap.grid, "Pack powers [W]: start:stop:count or comma list")
      ->required();
  c_cap->add_option("--dt", cap.dt, "Integration step [s]")->capture_default_str();
  c_cap->add_option("--output", cap.output, "CSV output path (stdout if omitted)");
  c_cap->callback([&] { action = [&] { return run_capacity_sweep(cap); }; });

  FitMotorArgs fm;
  auto* c_fm = app.add_subcommand("fit-motor", "Fit motor-propeller coefficients to a thrust-stand log");
  c_fm->add_option("log", fm.log, "Thrust log CSV")->required();
  c_fm->add_option("--output", fm.output, "Coefficient key/value output path");
  c_fm->callback([&] { action = [&] { return run_fit_motor(fm); }; });

  FitBatteryArgs fb;
  auto* c_fb = app.add_subcommand("fit-battery", "Two-stage battery model fit to discharge logs");
  c_fb->add_option("log_dir", fb.log_dir, "Directory of discharge log CSVs (+ optional .pack sidecars)")
      ->required();
  fb.pack.add_to(c_fb, false);
  c_fb->add_option("--output", fb.output, "Coefficient key/value output path");
  c_fb->callback([&] { action = [&] { return run_fit_battery(fb); }; });

  SynthDischargeArgs sd;
  auto* c_sd = app.add_subcommand("synth-discharge", "Generate a synthetic discharge log");
  sd.pack.add_to(c_sd, true);
  c_sd->add_option("--power-w", sd.power_w, "Constant pack power [W]");
  c_sd->add_option("--profile", sd.profile, "Piecewise-constant profile CSV (time_s,power_w)");
  c_sd->add_option("--horizon-s", sd.horizon, "Profile end time [s]")->capture_default_str();
  c_sd->add_option("--noise-mv", sd.noise_mv, "Gaussian cell-voltage noise [mV]")->capture_default_str();
  c_sd->add_option("--seed", sd.seed, "Noise seed")->capture_default_str();
  c_sd->add_option("--sample-every", sd.sample_every, "Keep every n-th step")->capture_default_str();
  c_sd->add_option("--output", sd.output, "Log CSV output path")->required();
  c_sd->callback([&] { action = [&] { return run_synth_discharge(sd); }; });

  SynthThrustArgs st;
  auto* c_st = app.add_subcommand("synth-thrust", "Generate a synthetic thrust-stand log");
  c_st->add_option("--cd", st.c_d, "Drag coefficient")->required();
  c_st->add_option("--m0", st.m0, "Friction term");
  c_st->add_option("--m1", st.m1, "Cubic loss term");
  c_st->add_option("--m2", st.m2, "Sixth-power loss term");
  c_st->add_option("--omega-grid", st.grid, "start:stop:count or comma list [rad/s]");
  c_st->add_option("--from-efficiency", st.from_efficiency,
                   "Efficiency marks CSV (omega_rad_s,efficiency); rows use torque = cd w^2");
  c_st->add_option("--noise-rel", st.noise_rel, "Multiplicative power noise")->capture_default_str();
  c_st->add_option("--seed", st.seed, "Noise seed")->capture_default_str();
  c_st->add_option("--output", st.output, "Log CSV output path")->required();
  c_st->callback([&] { action = [&] { return run_synth_thrust(st); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    return action();
  } catch (const CommandFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const InfeasiblePower& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const FitError& e) {
    std::cerr << "error: fit failed: " << e.what() << "\n";
    return kFitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
