#include "mrange/fixtures.hpp"

#include <charconv>
#include <random>

#include "mrange/errors.hpp"
#include "mrange/io.hpp"

namespace mrange::fixtures {

DischargeLog generate_synthetic_discharge(const BatteryPack& pack, const BatteryParams& params,
                                          const PowerProfile& profile,
                                          const SyntheticDischargeOptions& options) {
  if (options.sample_every < 1) throw InputError("synthetic discharge: sample_every must be >= 1");
  const auto trace = simulate_discharge(pack, params, profile, {.dt = options.dt});
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.noise_mv / 1000.0);
  std::vector<DischargeSample> rows;
  const std::size_t n = trace.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % static_cast<std::size_t>(options.sample_every) != 0 && i + 1 != n) continue;
    const auto& s = trace.samples[i];
    const double u = options.noise_mv > 0.0 ? s.u_cell + noise(rng) : s.u_cell;
    rows.push_back({s.time, profile.power_at(s.time), u * pack.series_count()});
  }
  return make_discharge_log(pack, std::move(rows));
}

ThrustLog generate_synthetic_thrust_log(const MotorPropCoeffs& coeffs,
                                        const std::vector<double>& omegas,
                                        const SyntheticThrustOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.power_noise_rel);
  ThrustLog log;
  for (double w : omegas) {
    double p = modelled_electrical_power(coeffs, w);
    if (options.power_noise_rel > 0.0) p *= 1.0 + noise(rng);
    log.rows.push_back({w, options.thrust_coeff * w * w, drag_torque(coeffs, w), p});
  }
  return log;
}

ThrustLog thrust_log_from_efficiency(const std::vector<EfficiencyPoint>& points, double c_d,
                                     double thrust_coeff) {
  ThrustLog log;
  for (const auto& p : points) {
    if (!(p.efficiency > 0.0)) throw InputError("efficiency points: efficiency must be > 0");
    const double torque = c_d * p.omega * p.omega;
    log.rows.push_back(
        {p.omega, thrust_coeff * p.omega * p.omega, torque, torque * p.omega / p.efficiency});
  }
  return log;
}

std::vector<EfficiencyPoint> parse_efficiency_points(std::string_view csv_text) {
  std::vector<EfficiencyPoint> out;
  for (const auto& r : io::parse_csv(csv_text, {"omega_rad_s", "efficiency"}))
    out.push_back({r[0], r[1]});
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

FixtureKind parse_kind(std::string_view s) {
  if (s == "vehicle_spec") return FixtureKind::vehicle_spec;
  if (s == "thrust_log") return FixtureKind::thrust_log;
  if (s == "discharge_log") return FixtureKind::discharge_log;
  if (s == "expected_report") return FixtureKind::expected_report;
  if (s == "efficiency_points") return FixtureKind::efficiency_points;
  if (s == "power_profile") return FixtureKind::power_profile;
  throw InputError("manifest: unknown fixture kind '" + std::string(s) + "'");
}

}  // namespace

std::vector<Fixture> load_manifest(const std::filesystem::path& manifest) {
  const std::string text = io::read_file(manifest);
  std::vector<Fixture> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> f;
    std::size_t p = 0;
    for (int i = 0; i < 5; ++i) {
      const auto bar = line.find('|', p);
      if (bar == std::string_view::npos) throw InputError("manifest: malformed line");
      f.push_back(line.substr(p, bar - p));
      p = bar + 1;
    }
    f.push_back(line.substr(p));
    std::uint64_t sum = 0;
    auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), sum, 16);
    if (ec != std::errc() || ptr != f[4].data() + f[4].size())
      throw InputError("manifest: bad checksum field");
    if (f[3] != "published" && f[3] != "derived" && f[3] != "trivial")
      throw InputError("manifest: unknown provenance '" + std::string(f[3]) + "'");
    out.push_back({std::string(f[0]), parse_kind(f[1]), std::string(f[2]), std::string(f[3]),
                   std::string(f[5]), sum});
  }
  return out;
}

}  // namespace mrange::fixtures
