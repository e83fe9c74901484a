// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "mrange/capacity.hpp"
#include "mrange/estimator.hpp"
#include "mrange/fixtures.hpp"
#include "mrange/identification.hpp"

namespace {

using namespace mrange;

std::vector<double> power_grid(int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(50.0 + 700.0 * i / (n - 1));
  return g;
}

void BM_CapacitySweepSerial(benchmark::State& state) {
  const BatteryPack pack(4, 1, 1.8);
  const auto grid = power_grid(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        capacity_sweep_serial(pack, builtin_battery_params(), builtin_empirical_coeffs(), grid));
}

void BM_CapacitySweepParallel(benchmark::State& state) {
  const BatteryPack pack(4, 1, 1.8);
  const auto grid = power_grid(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        capacity_sweep(pack, builtin_battery_params(), builtin_empirical_coeffs(), grid));
}

SweepInputs mavic_inputs() {
  return SweepInputs{VehicleSpec({.mass_kg = 0.909,
                                  .rotor_count = 4,
                                  .propeller_radius_m = 0.11,
                                  .surface_area_cm2 = 194.7,
                                  .pack = BatteryPack(4, 1, 3.85)}),
                     default_environment(), builtin_empirical_coeffs(), builtin_battery_params(),
                     EstimateOptions{.full_battery = true}};
}

void BM_MassSweepSerial(benchmark::State& state) {
  const auto in = mavic_inputs();
  std::vector<double> grid;
  for (int i = 0; i < state.range(0); ++i) grid.push_back(0.5 + 1.5 * i / (state.range(0) - 1));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(in, SweepParameter::mass, grid));
}

void BM_MassSweepParallel(benchmark::State& state) {
  const auto in = mavic_inputs();
  std::vector<double> grid;
  for (int i = 0; i < state.range(0); ++i) grid.push_back(0.5 + 1.5 * i / (state.range(0) - 1));
  for (auto _ : state) benchmark::DoNotOptimize(sweep(in, SweepParameter::mass, grid));
}

std::vector<DischargeLog> stepped_logs() {
  std::vector<DischargeLog> logs;
  for (double cap : {1.3, 1.8, 2.6, 3.3}) {
    const BatteryPack pack(4, 1, cap);
    const auto profile = PowerProfile::piecewise(
        {{0.0, 40.0 * cap}, {60.0, 80.0 * cap}, {120.0, 160.0 * cap}}, 400.0);
    logs.push_back(fixtures::generate_synthetic_discharge(pack, builtin_battery_params(), profile));
  }
  return logs;
}

void BM_ResidualsSerial(benchmark::State& state) {
  const auto logs = stepped_logs();
  for (auto _ : state)
    benchmark::DoNotOptimize(voltage_residuals_serial(logs, builtin_battery_params(), 0.05));
}

void BM_ResidualsParallel(benchmark::State& state) {
  const auto logs = stepped_logs();
  for (auto _ : state)
    benchmark::DoNotOptimize(voltage_residuals(logs, builtin_battery_params(), 0.05));
}

}  // namespace

BENCHMARK(BM_CapacitySweepSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CapacitySweepParallel)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MassSweepSerial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MassSweepParallel)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualsParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
