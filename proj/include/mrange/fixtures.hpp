#pragma once

// Synthetic data generators for identification round-trips, and the checked-in
// fixture manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mrange/battery.hpp"
#include "mrange/identification.hpp"
#include "mrange/motor.hpp"

namespace mrange::fixtures {

struct SyntheticDischargeOptions {
  double noise_mv = 0.0;  // std-dev of Gaussian noise added to each cell voltage
  std::uint64_t seed = 1;
  double dt = 0.05;
  int sample_every = 1;  // keep every n-th simulation step
};

// Simulates the profile with the OTC model and logs pack power and voltage.
// Logging stops at the cutoff sample or the last feasible sample.
DischargeLog generate_synthetic_discharge(const BatteryPack& pack, const BatteryParams& params,
                                          const PowerProfile& profile,
                                          const SyntheticDischargeOptions& options = {});

struct SyntheticThrustOptions {
  double power_noise_rel = 0.0;  // multiplicative Gaussian noise on electrical power
  std::uint64_t seed = 1;
  double thrust_coeff = 1.0e-6;  // N s^2, thrust = c_t w^2
};

ThrustLog generate_synthetic_thrust_log(const MotorPropCoeffs& coeffs,
                                        const std::vector<double>& omegas,
                                        const SyntheticThrustOptions& options = {});

struct EfficiencyPoint {
  double omega;
  double efficiency;
};

// Thrust-stand rows consistent with measured efficiencies: torque = c_d w^2 for an
// assumed c_d and power = torque * w / efficiency. The fitted efficiency curve does
// not depend on the assumed c_d.
ThrustLog thrust_log_from_efficiency(const std::vector<EfficiencyPoint>& points, double c_d,
                                     double thrust_coeff = 1.0e-6);

std::vector<EfficiencyPoint> parse_efficiency_points(std::string_view csv_text);

enum class FixtureKind {
  vehicle_spec,
  thrust_log,
  discharge_log,
  expected_report,
  efficiency_points,
  power_profile
};

struct Fixture {
  std::string name;
  FixtureKind kind;
  std::string path;        // relative to the manifest directory
  std::string provenance;  // published | derived | trivial
  std::string source;      // free text, origin of the data
  std::uint64_t checksum;  // FNV-1a 64 of the file bytes
};

std::uint64_t fnv1a64(std::string_view bytes);

// Manifest lines: name|kind|path|provenance|checksum(hex)|source
std::vector<Fixture> load_manifest(const std::filesystem::path& manifest);

}  // namespace mrange::fixtures
