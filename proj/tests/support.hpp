#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "mrange/core.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(MRANGE_FIXTURES_DIR) / name;
}

// Published vehicle inputs (DJI Mavic 2), radius rounded to 0.11 m.
inline mrange::VehicleSpec dji_spec() {
  return mrange::VehicleSpec(mrange::VehicleFields{
      0.909, 4, 0.11, 194.7, mrange::BatteryPack::from_designator("4S1P", 3.85)});
}

inline mrange::BatteryPack pack_4s_1800() { return mrange::BatteryPack(4, 1, 1.8); }

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace testing_support
