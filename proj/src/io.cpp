#include "mrange/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "mrange/errors.hpp"

namespace mrange::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw InputError(std::string(what) + ": not a number: '" + std::string(text) + "'");
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InputError(std::string(what) + ": not an integer: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

const char* to_string(HoverPowerSource s) {
  return s == HoverPowerSource::injected ? "injected" : "computed";
}
const char* to_string(BatteryPath p) {
  return p == BatteryPath::cubic_and_full ? "cubic+full" : "cubic";
}
const char* to_string(MotorMode m) {
  return m == MotorMode::fitted_model ? "fitted" : "constant";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::pair<std::string, std::string>> parse_kv(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  int lineno = 0;
  for (auto raw : lines_of(text)) {
    ++lineno;
    const auto hash = raw.find('#');
    const auto line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InputError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw InputError("line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) throw InputError("duplicate key '" + key + "'");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

void write_kv(std::ostream& os, const std::vector<std::pair<std::string, double>>& values) {
  for (const auto& [k, v] : values) os << k << " = " << format_double(v) << "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

VehicleConfig parse_vehicle_spec(std::string_view text) {
  std::optional<double> mass, radius, diameter_in, area, capacity, eta_p, eta_m, rho, cutoff;
  std::optional<int> rotors;
  std::optional<std::string> battery;
  for (const auto& [key, value] : parse_kv(text)) {
    if (key == "mass_kg") mass = parse_number(value, key);
    else if (key == "rotor_count") rotors = parse_int(value, key);
    else if (key == "propeller_radius_m") radius = parse_number(value, key);
    else if (key == "propeller_diameter_in") diameter_in = parse_number(value, key);
    else if (key == "surface_area_cm2") area = parse_number(value, key);
    else if (key == "battery") battery = value;
    else if (key == "capacity_ah") capacity = parse_number(value, key);
    else if (key == "eta_p") eta_p = parse_number(value, key);
    else if (key == "eta_m") eta_m = parse_number(value, key);
    else if (key == "rho") rho = parse_number(value, key);
    else if (key == "cutoff_v_per_cell") cutoff = parse_number(value, key);
    else throw InputError("vehicle spec: unknown key '" + key + "'");
  }
  const auto missing = [](const char* key) {
    return InputError(std::string("vehicle spec: missing key '") + key + "'");
  };
  if (!mass) throw missing("mass_kg");
  if (!rotors) throw missing("rotor_count");
  if (!area) throw missing("surface_area_cm2");
  if (!battery) throw missing("battery");
  if (!capacity) throw missing("capacity_ah");
  if (radius && diameter_in)
    throw InputError("vehicle spec: give propeller_radius_m or propeller_diameter_in, not both");
  if (!radius && !diameter_in) throw missing("propeller_radius_m");
  const double r = radius ? *radius : *diameter_in * 0.0254 / 2.0;

  const BatteryPack pack =
      BatteryPack::from_designator(*battery, *capacity, cutoff.value_or(kDefaultCutoffVoltage));
  VehicleFields f{.mass_kg = *mass,
                  .rotor_count = *rotors,
                  .propeller_radius_m = r,
                  .surface_area_cm2 = *area,
                  .pack = pack,
                  .propeller_figure_of_merit = eta_p.value_or(kDefaultFigureOfMerit),
                  .motor_efficiency = eta_m.value_or(kDefaultMotorEfficiency)};
  if (rho) Environment(*rho, kStandardGravity);  // validates
  return VehicleConfig{VehicleSpec(f), rho};
}

VehicleConfig load_vehicle_spec(const std::filesystem::path& path) {
  return parse_vehicle_spec(read_file(path));
}

BatteryPack parse_pack_kv(std::string_view text) {
  std::optional<std::string> battery;
  std::optional<double> capacity, cutoff;
  for (const auto& [key, value] : parse_kv(text)) {
    if (key == "battery") battery = value;
    else if (key == "capacity_ah") capacity = parse_number(value, key);
    else if (key == "cutoff_v_per_cell") cutoff = parse_number(value, key);
    else throw InputError("pack file: unknown key '" + key + "'");
  }
  if (!battery || !capacity) throw InputError("pack file: needs battery and capacity_ah");
  return BatteryPack::from_designator(*battery, *capacity, cutoff.value_or(kDefaultCutoffVoltage));
}

std::vector<std::vector<double>> parse_csv(std::string_view text,
                                           const std::vector<std::string>& header) {
  const auto lines = lines_of(text);
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size()) throw InputError("csv: empty input");
  const auto cols = split(trim(lines[i]), ',');
  bool header_ok = cols.size() == header.size();
  for (std::size_t c = 0; header_ok && c < cols.size(); ++c) header_ok = cols[c] == header[c];
  if (!header_ok) {
    std::string expected;
    for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
    throw InputError("csv: header mismatch, expected '" + expected + "'");
  }
  std::vector<std::vector<double>> rows;
  for (++i; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size())
      throw InputError("csv line " + std::to_string(i + 1) + ": expected " +
                       std::to_string(header.size()) + " fields");
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c)
      row.push_back(parse_number(fields[c], "csv line " + std::to_string(i + 1)));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("csv: no data rows");
  return rows;
}

ThrustLog parse_thrust_log(std::string_view text) {
  ThrustLog log;
  for (const auto& r : parse_csv(text, kThrustLogHeader)) {
    if (r[0] < 0.0) throw InputError("thrust log: negative omega");
    log.rows.push_back({r[0], r[1], r[2], r[3]});
  }
  return log;
}

DischargeLog parse_discharge_log(std::string_view text, const BatteryPack& pack) {
  std::vector<DischargeSample> rows;
  for (const auto& r : parse_csv(text, kDischargeLogHeader)) rows.push_back({r[0], r[1], r[2]});
  return make_discharge_log(pack, std::move(rows));
}

PowerProfile parse_power_profile(std::string_view text, double horizon_s) {
  std::vector<PowerProfile::Segment> segments;
  for (const auto& r : parse_csv(text, kProfileHeader)) segments.push_back({r[0], r[1]});
  return PowerProfile::piecewise(std::move(segments), horizon_s);
}

void write_thrust_log(std::ostream& os, const ThrustLog& log) {
  os << "omega_rad_s,thrust_n,torque_nm,power_w\n";
  for (const auto& r : log.rows)
    os << format_double(r.omega) << ',' << format_double(r.thrust) << ','
       << format_double(r.torque) << ',' << format_double(r.power) << '\n';
}

void write_discharge_log(std::ostream& os, const DischargeLog& log) {
  os << "time_s,power_w,voltage_v\n";
  for (const auto& r : log.rows)
    os << format_double(r.time) << ',' << format_double(r.pack_power) << ','
       << format_double(r.pack_voltage) << '\n';
}

void write_trace_csv(std::ostream& os, const DischargeTrace& trace, std::size_t max_rows) {
  os << "time_s,p_cell_w_per_ah,e_cell_kj_per_ah,u_cell_v,u_pack_v\n";
  for (const auto& s : trace.decimated(max_rows))
    os << format_double(s.time) << ',' << format_double(s.p_cell) << ','
       << format_double(s.e_cell) << ',' << format_double(s.u_cell) << ','
       << format_double(s.u_pack) << '\n';
}

std::string report_csv_header() {
  return "v_ih_m_s,p_h_w,p_e_w,p_r_w,p_e_sd_w,p_r_sd_w,eta_e,eta_r,p_mot_e_w,p_mot_r_w,"
         "p_cell_e_w_per_ah,p_cell_r_w_per_ah,kappa_e,kappa_r,c_eff_e_ah,c_eff_r_ah,t_e_s,t_r_s,"
         "v_e_m_s,v_r_m_s,x_r_m,hover_source,battery_path,motor_mode,cubic_out_of_domain,"
         "t_e_full_s,t_r_full_s,kappa_e_full,kappa_r_full";
}

std::string report_csv_row(const PerformanceReport& r) {
  std::ostringstream os;
  for (double v : {r.v_ih, r.p_h, r.p_e, r.p_r, r.p_e_sd, r.p_r_sd, r.eta_e, r.eta_r, r.p_mot_e,
                   r.p_mot_r, r.p_cell_e, r.p_cell_r, r.kappa_e, r.kappa_r, r.c_eff_e, r.c_eff_r,
                   r.t_e, r.t_r, r.v_e, r.v_r, r.x_r})
    os << format_double(v) << ',';
  os << to_string(r.hover_source) << ',' << to_string(r.battery_path) << ','
     << to_string(r.motor_mode) << ',' << (r.cubic_out_of_domain ? 1 : 0);
  if (r.full) {
    os << ',' << format_double(r.full->time_endurance) << ',' << format_double(r.full->time_range)
       << ',' << format_double(r.full->kappa_endurance) << ','
       << format_double(r.full->kappa_range);
  } else {
    os << ",,,,";
  }
  return os.str();
}

void write_report_kv(std::ostream& os, const PerformanceReport& r) {
  const std::string header_line = report_csv_header();
  const auto header = split(header_line, ',');
  const std::string row = report_csv_row(r);
  const auto values = split(row, ',');
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (values[i].empty()) continue;
    os << header[i] << " = " << values[i] << '\n';
  }
}

std::string capacity_csv_header() {
  return "pack_power_w,p_cell_w_per_ah,effective_wh,kappa_full,kappa_cubic,endpoint_time_s,"
         "termination,cubic_out_of_domain";
}

std::string capacity_csv_row(const CapacityPoint& p) {
  std::ostringstream os;
  os << format_double(p.pack_power) << ',' << format_double(p.p_cell) << ','
     << format_double(p.effective_wh) << ',' << format_double(p.kappa_full) << ','
     << format_double(p.kappa_cubic) << ',' << format_double(p.endpoint_time) << ','
     << mrange::to_string(p.termination) << ',' << (p.cubic_out_of_domain ? 1 : 0);
  return os.str();
}

}  // namespace mrange::io
