#pragma once

// Text formats: key/value documents (vehicle specs, coefficient files, pack
// sidecars) and the CSV schemas for traces, logs and reports.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrange/battery.hpp"
#include "mrange/capacity.hpp"
#include "mrange/core.hpp"
#include "mrange/estimator.hpp"
#include "mrange/identification.hpp"

namespace mrange::io {

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

// "key = value" lines; '#' starts a comment. Duplicate keys are rejected.
std::vector<std::pair<std::string, std::string>> parse_kv(std::string_view text);
void write_kv(std::ostream& os, const std::vector<std::pair<std::string, double>>& values);

std::string read_file(const std::filesystem::path& path);

struct VehicleConfig {
  VehicleSpec spec;
  std::optional<double> air_density;  // "rho" key
};

// Keys: mass_kg, rotor_count, propeller_diameter_in | propeller_radius_m,
// surface_area_cm2, battery, capacity_ah, and optional eta_p, eta_m, rho,
// cutoff_v_per_cell. Unknown keys are an error.
VehicleConfig parse_vehicle_spec(std::string_view text);
VehicleConfig load_vehicle_spec(const std::filesystem::path& path);

// Pack sidecar for discharge logs: battery, capacity_ah, optional cutoff_v_per_cell.
BatteryPack parse_pack_kv(std::string_view text);

// Numeric CSV with an exact header match. Throws InputError on an empty table.
std::vector<std::vector<double>> parse_csv(std::string_view text,
                                           const std::vector<std::string>& header);

inline const std::vector<std::string> kThrustLogHeader{"omega_rad_s", "thrust_n", "torque_nm",
                                                       "power_w"};
inline const std::vector<std::string> kDischargeLogHeader{"time_s", "power_w", "voltage_v"};
inline const std::vector<std::string> kProfileHeader{"time_s", "power_w"};
inline const std::vector<std::string> kTraceHeader{"time_s", "p_cell_w_per_ah", "e_cell_kj_per_ah",
                                                   "u_cell_v", "u_pack_v"};

ThrustLog parse_thrust_log(std::string_view text);
DischargeLog parse_discharge_log(std::string_view text, const BatteryPack& pack);
// Rows start piecewise-constant segments; the last one holds until horizon_s.
PowerProfile parse_power_profile(std::string_view text, double horizon_s);

void write_thrust_log(std::ostream& os, const ThrustLog& log);
void write_discharge_log(std::ostream& os, const DischargeLog& log);
// At most max_rows rows, final row at the termination event.
void write_trace_csv(std::ostream& os, const DischargeTrace& trace, std::size_t max_rows = 2000);

// Report rows. Column order is stable; see report_csv_header().
std::string report_csv_header();
std::string report_csv_row(const PerformanceReport& r);
void write_report_kv(std::ostream& os, const PerformanceReport& r);

std::string capacity_csv_header();
std::string capacity_csv_row(const CapacityPoint& p);

}  // namespace mrange::io
