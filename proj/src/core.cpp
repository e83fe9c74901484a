#include "mrange/core.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "mrange/errors.hpp"

namespace mrange {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InputError(what);
}

bool parse_count(std::string_view text, int& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

Environment::Environment(double air_density, double gravity)
    : air_density_(air_density), gravity_(gravity) {
  require(air_density > 0.0 && std::isfinite(air_density), "environment: air_density must be > 0");
  require(gravity > 0.0 && std::isfinite(gravity), "environment: gravity must be > 0");
}

Environment default_environment() { return {kDefaultAirDensity, kStandardGravity}; }

BatteryPack::BatteryPack(int series_count, int parallel_count, double pack_capacity_ah,
                         double cutoff_voltage_per_cell, double nominal_cell_voltage)
    : series_(series_count),
      parallel_(parallel_count),
      capacity_ah_(pack_capacity_ah),
      cutoff_(cutoff_voltage_per_cell),
      nominal_(nominal_cell_voltage) {
  require(series_count >= 1, "battery pack: series count must be >= 1");
  require(parallel_count >= 1, "battery pack: parallel count must be >= 1");
  require(pack_capacity_ah > 0.0 && std::isfinite(pack_capacity_ah),
          "battery pack: capacity must be > 0");
  require(cutoff_voltage_per_cell > 0.0 && cutoff_voltage_per_cell < kFullCellVoltage,
          "battery pack: cutoff voltage must be in (0, 4.2) V");
  require(nominal_cell_voltage > 0.0, "battery pack: nominal cell voltage must be > 0");
}

BatteryPack BatteryPack::from_designator(std::string_view designator, double pack_capacity_ah,
                                         double cutoff_voltage_per_cell) {
  std::string upper;
  for (char c : designator) {
    if (!std::isspace(static_cast<unsigned char>(c)))
      upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  const auto s_pos = upper.find('S');
  if (s_pos == std::string::npos || s_pos == 0)
    throw InputError("battery designator '" + std::string(designator) + "': expected <N>S[<M>P]");

  int series = 0;
  int parallel = 1;
  if (!parse_count(std::string_view(upper).substr(0, s_pos), series))
    throw InputError("battery designator '" + std::string(designator) + "': bad series count");
  std::string_view rest = std::string_view(upper).substr(s_pos + 1);
  if (!rest.empty()) {
    if (rest.back() != 'P' || !parse_count(rest.substr(0, rest.size() - 1), parallel))
      throw InputError("battery designator '" + std::string(designator) + "': bad parallel count");
  }
  return BatteryPack(series, parallel, pack_capacity_ah, cutoff_voltage_per_cell);
}

std::string BatteryPack::designator() const {
  return std::to_string(series_) + "S" + std::to_string(parallel_) + "P";
}

BatteryPack BatteryPack::with_capacity(double pack_capacity_ah) const {
  return BatteryPack(series_, parallel_, pack_capacity_ah, cutoff_, nominal_);
}

VehicleSpec::VehicleSpec(const VehicleFields& fields) : f_(fields) {
  require(f_.mass_kg > 0.0 && std::isfinite(f_.mass_kg), "vehicle: mass must be > 0");
  require(f_.rotor_count >= 1, "vehicle: rotor count must be >= 1");
  require(f_.propeller_radius_m > 0.0 && std::isfinite(f_.propeller_radius_m),
          "vehicle: propeller radius must be > 0");
  require(f_.surface_area_cm2 > 0.0 && std::isfinite(f_.surface_area_cm2),
          "vehicle: surface area must be > 0");
  require(f_.propeller_figure_of_merit > 0.0 && f_.propeller_figure_of_merit <= 1.0,
          "vehicle: propeller figure of merit must be in (0, 1]");
  require(f_.motor_efficiency > 0.0 && f_.motor_efficiency <= 1.0,
          "vehicle: motor efficiency must be in (0, 1]");
}

VehicleSpec VehicleSpec::with_mass(double mass_kg) const {
  VehicleFields f = f_;
  f.mass_kg = mass_kg;
  return VehicleSpec(f);
}

VehicleSpec VehicleSpec::with_capacity(double pack_capacity_ah) const {
  VehicleFields f = f_;
  f.pack = f_.pack.with_capacity(pack_capacity_ah);
  return VehicleSpec(f);
}

VehicleSpec VehicleSpec::with_surface_area(double surface_area_cm2) const {
  VehicleFields f = f_;
  f.surface_area_cm2 = surface_area_cm2;
  return VehicleSpec(f);
}

void BatteryParams::validate() const {
  for (double v : {a0, a1, a2, a3, b0, b1, b2, r_min, tau_rc, k})
    require(std::isfinite(v), "battery params: all coefficients must be finite");
  require(r_min > 0.0, "battery params: r_min must be > 0");
  require(tau_rc > 0.0, "battery params: tau_rc must be > 0");
  require(a0 >= 3.0 && a0 <= 4.4, "battery params: a0 must be in [3.0, 4.4] V");
}

void EmpiricalCoeffs::validate() const {
  require(power_ratio_endurance < 1.0 && 1.0 < power_ratio_range,
          "empirical coeffs: power ratios must straddle 1");
  for (double c : {c0e, c1e, c2e, c0r, c1r, c2r})
    require(c > 0.0, "empirical coeffs: speed-model coefficients must be > 0");
}

BatteryParams builtin_battery_params() {
  return BatteryParams{
      .a0 = 4.2,
      .a1 = -0.1102178,
      .a2 = 0.0103368,
      .a3 = -4.3778e-4,
      .b0 = 0.0015778,
      .b1 = -7.7608e-5,
      .b2 = 0.0069498,
      .r_min = 0.0045,
      .tau_rc = 3.3,
      .k = 0.00104846,
  };
}

EmpiricalCoeffs builtin_empirical_coeffs() {
  return EmpiricalCoeffs{
      .power_ratio_range = 1.092,
      .power_ratio_range_sd = 0.0361,
      .power_ratio_endurance = 0.914,
      .power_ratio_endurance_sd = 0.0323,
      .c0e = 0.10188,
      .c1e = 0.071358,
      .c2e = 0.0007381,
      .c0r = 0.041546,
      .c1r = 0.041122,
      .c2r = 0.00053292,
      .d0 = 0.9876,
      .d1 = -0.0020,
      .d2 = -5.2484e-05,
      .d3 = 1.2230e-07,
  };
}

}  // namespace mrange
