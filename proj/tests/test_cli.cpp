#include <doctest.h>

#include <algorithm>
#include <regex>
#include <sstream>
#include <string>

#include "cli_runner.hpp"

using cli::fixture_arg;
using cli::run;
using cli::Scratch;

namespace {

double field(const std::string& text, const std::string& pattern) {
  std::smatch m;
  REQUIRE(std::regex_search(text, m, std::regex(pattern)));
  return std::stod(m[1]);
}

std::size_t entries(const Scratch& s) {
  return static_cast<std::size_t>(std::distance(std::filesystem::directory_iterator(s.dir()),
                                                std::filesystem::directory_iterator()));
}

const char* kPack = "--battery 4S1P --capacity-ah 1.8";

}  // namespace

TEST_CASE("help exits 0 without side effects") {
  Scratch s;
  for (const char* sub : {"", "estimate", "sweep", "discharge", "capacity-sweep", "fit-motor",
                          "fit-battery", "synth-discharge", "synth-thrust"}) {
    CAPTURE(sub);
    const auto r = run(std::string(sub) + " --help", s);
    CHECK(r.code == 0);
    CHECK_FALSE(r.out.empty());
  }
  CHECK(entries(s) == 0);
}

TEST_CASE("estimate prints the worked chain") {
  Scratch s;
  const auto r = run("estimate " + fixture_arg("dji_mavic2.spec") + " --inject-hover-power 81.9", s);
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "t_e = ([0-9.]+) s") == doctest::Approx(1998.0).epsilon(0.005));
  for (int step = 1; step <= 8; ++step)
    CHECK(r.out.find("step " + std::to_string(step)) != std::string::npos);
}

TEST_CASE("estimate writes report files") {
  Scratch s;
  const auto r = run("estimate " + fixture_arg("dji_mavic2.spec") +
                         " --inject-hover-power 81.9 --output r.csv --report r.kv",
                     s);
  REQUIRE(r.code == 0);
  const auto csv = cli::slurp(s / "r.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(cli::slurp(s / "r.kv") == cli::slurp(std::filesystem::path(MRANGE_FIXTURES_DIR) / "dji_mavic2_injected.report"));
}

TEST_CASE("estimate input errors exit 2") {
  Scratch s;
  cli::write(s / "bad.spec",
             "mass_kg = -1\nrotor_count = 4\npropeller_radius_m = 0.1\nsurface_area_cm2 = 100\n"
             "battery = 4S\ncapacity_ah = 2\n");
  auto r = run("estimate bad.spec", s);
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  r = run("estimate missing.spec", s);
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  r = run("estimate " + fixture_arg("dji_mavic2.spec") + " --rho abc", s);
  CHECK(r.code == 2);
  r = run("no-such-command", s);
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("full battery path on an overloaded pack exits 3") {
  Scratch s;
  cli::write(s / "heavy.spec",
             "mass_kg = 20\nrotor_count = 4\npropeller_radius_m = 0.1\nsurface_area_cm2 = 300\n"
             "battery = 1S\ncapacity_ah = 0.05\n");
  const auto r = run("estimate heavy.spec --full-battery", s);
  CHECK(r.code == 3);
  CHECK(r.err.find("infeasible") != std::string::npos);
  CHECK(run("estimate heavy.spec", s).code == 0);
}

TEST_CASE("discharge endpoint and capacity") {
  Scratch s;
  const auto r = run(std::string("discharge ") + kPack + " --power-w 100 --output t.csv", s);
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "endpoint_time_s = ([0-9.]+)") == doctest::Approx(920.0).epsilon(0.05));
  CHECK(field(r.out, "effective_capacity_wh = ([0-9.]+)") == doctest::Approx(25.6).epsilon(0.05));
  const auto trace = cli::slurp(s / "t.csv");
  CHECK(std::count(trace.begin(), trace.end(), '\n') <= 2001);
}

TEST_CASE("zero power runs to the horizon") {
  Scratch s;
  const auto r = run(std::string("discharge ") + kPack + " --power-w 0 --horizon-s 30", s);
  CHECK(r.code == 0);
  CHECK(r.out.find("termination = profile_end") != std::string::npos);
  CHECK(r.out.find("effective_capacity_wh = undefined") != std::string::npos);
}

TEST_CASE("infeasible discharge exits 3 with a flagged partial trace") {
  Scratch s;
  cli::write(s / "p.csv", "time_s,power_w\n0,100\n20,20000\n");
  const auto r = run(std::string("discharge ") + kPack + " --profile p.csv --horizon-s 60 --output t.csv", s);
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
  CHECK(r.out.find("termination = infeasible_power") != std::string::npos);
  const auto trace = cli::slurp(s / "t.csv");
  CHECK(std::count(trace.begin(), trace.end(), '\n') > 100);
}

TEST_CASE("profile step shows the resistive jump") {
  Scratch s;
  cli::write(s / "p.csv", "time_s,power_w\n0,100\n30,400\n");
  const auto r = run(std::string("discharge ") + kPack + " --profile p.csv --horizon-s 60 --dt 0.05 --output t.csv", s);
  REQUIRE(r.code == 0);
  const auto rows = cli::slurp(s / "t.csv");
  std::istringstream in(rows);
  std::string line;
  std::getline(in, line);
  double prev_u = 0, prev_p = 0, prev_t = 0;
  bool seen = false;
  while (std::getline(in, line)) {
    double t, p, e, u, up;
    char c;
    std::istringstream ls(line);
    ls >> t >> c >> p >> c >> e >> c >> u >> c >> up;
    if (!seen && t >= 30.0 - 1e-9) {
      seen = true;
      const double r0 = std::max(0.0015778 - 7.7608e-5 * (e * 1000.0 / t) + 0.0069498 * 1.8, 0.0045);
      const double di = p / u - prev_p / prev_u;
      CHECK(prev_t == doctest::Approx(29.95));
      CHECK(prev_u - u == doctest::Approx(r0 * di).epsilon(0.02));
    }
    prev_u = u;
    prev_p = p;
    prev_t = t;
  }
  CHECK(seen);
}

TEST_CASE("single-point capacity sweep equals discharge") {
  Scratch s;
  const auto d = run(std::string("discharge ") + kPack + " --power-w 250", s);
  const auto c = run(std::string("capacity-sweep ") + kPack + " --power-grid 250", s);
  REQUIRE(d.code == 0);
  REQUIRE(c.code == 0);
  const double wh = field(d.out, "effective_capacity_wh = ([0-9.]+)");
  const double wh_sweep = field(c.out, "\n250,[^,]+,([0-9.]+),");
  CHECK(wh_sweep == wh);
}

TEST_CASE("capacity sweep reports infeasible points in-row") {
  Scratch s;
  const auto c = run(std::string("capacity-sweep ") + kPack + " --power-grid 15,500,40000", s);
  CHECK(c.code == 0);
  CHECK(c.out.find("infeasible_power") != std::string::npos);
  CHECK(field(c.out, "\n15,[^,]+,([0-9.]+),") == doctest::Approx(27.2).epsilon(0.03));
  CHECK(field(c.out, "\n500,[^,]+,([0-9.]+),") == doctest::Approx(16.7).epsilon(0.08));
}

TEST_CASE("outputs are byte-identical across runs") {
  Scratch s;
  const std::string spec = fixture_arg("dji_mavic2.spec");
  const std::string cmds[] = {
      "sweep " + spec + " --parameter mass --grid 0.5:2:16 --output OUT",
      std::string("capacity-sweep ") + kPack + " --power-grid 15:800:12 --output OUT",
      std::string("discharge ") + kPack + " --power-w 300 --output OUT",
      "estimate " + spec + " --full-battery --output OUT",
      "synth-discharge --battery 4S1P --capacity-ah 1.8 --power-w 200 --horizon-s 50 --noise-mv 20 --seed 4 --output OUT",
      "fit-motor " + fixture_arg("fig3_thrust_log.csv") + " --output OUT",
  };
  for (const auto& cmd : cmds) {
    CAPTURE(cmd);
    std::string a = cmd, b = cmd;
    a.replace(a.find("OUT"), 3, "a.out");
    b.replace(b.find("OUT"), 3, "b.out");
    REQUIRE(run(a, s).code == 0);
    REQUIRE(run(b, s).code == 0);
    CHECK(cli::slurp(s / "a.out") == cli::slurp(s / "b.out"));
    CHECK_FALSE(cli::slurp(s / "a.out").empty());
  }
}

TEST_CASE("fit-motor exit codes") {
  Scratch s;
  const auto ok = run("fit-motor " + fixture_arg("fig3_thrust_log.csv") + " --output m.kv", s);
  CHECK(ok.code == 0);
  CHECK(cli::slurp(s / "m.kv").find("c_d = ") != std::string::npos);
  cli::write(s / "empty.csv", "");
  CHECK(run("fit-motor empty.csv", s).code == 2);
  std::string degenerate = "omega_rad_s,thrust_n,torque_nm,power_w\n";
  for (int i = 0; i < 10; ++i) degenerate += (i % 2 ? "800,0.6,0.01,10\n" : "1600,2.5,0.04,75\n");
  cli::write(s / "two.csv", degenerate);
  const auto r = run("fit-motor two.csv", s);
  CHECK(r.code == 4);
  CHECK(r.err.find("distinct") != std::string::npos);
}

TEST_CASE("synthetic round trip through the CLI") {
  Scratch s;
  REQUIRE(run("synth-thrust --cd 2e-8 --m0 5e-3 --m1 1e-8 --m2 2e-19 --omega-grid 200:2500:20 --output t.csv", s).code == 0);
  const auto r = run("fit-motor t.csv --output m.kv", s);
  REQUIRE(r.code == 0);
  const auto kv = cli::slurp(s / "m.kv");
  CHECK(field(kv, "m1 = ([0-9.e+-]+)") == doctest::Approx(1e-8).epsilon(1e-6));
  CHECK(field(kv, "m2 = ([0-9.e+-]+)") == doctest::Approx(2e-19).epsilon(1e-6));
}

TEST_CASE("fit-battery on the fixture logs") {
  Scratch s;
  const auto r = run("fit-battery " + fixture_arg("discharge") + " --output b.kv", s);
  REQUIRE(r.code == 0);
  const auto kv = cli::slurp(s / "b.kv");
  CHECK(field(kv, "voltage_rmse_v = ([0-9.e+-]+)") < 0.005);
  CHECK(field(kv, "tau_rc = ([0-9.e+-]+)") == doctest::Approx(3.3).epsilon(0.2));
}

TEST_CASE("fit-battery without steps exits 4") {
  Scratch s;
  std::filesystem::create_directories(s / "logs");
  REQUIRE(run("synth-discharge --battery 4S1P --capacity-ah 1.8 --power-w 100 --horizon-s 60 --output logs/a.csv", s).code == 0);
  CHECK(run("fit-battery logs", s).code == 2);  // no pack descriptor
  CHECK(run("fit-battery logs --battery 4S1P --capacity-ah 1.8", s).code == 4);
}
