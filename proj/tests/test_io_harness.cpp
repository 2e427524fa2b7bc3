#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rossby/errors.hpp"
#include "rossby/harness.hpp"
#include "rossby/io.hpp"
#include "test_util.hpp"

using namespace rossby;
using namespace testutil;
namespace fs = std::filesystem;

namespace {
const double pi = kPi;

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}
}  // namespace

TEST_CASE("format_double round-trips bit-exactly") {
  const double xs[] = {0.0,       1.0,   -1.5,          pi,
                       1.0 / 3.0, 0.1,   1e-300,        1.7976931348623157e308,
                       -2.2e-308, 123.0, 6.02214076e23, -0.0};
  for (double x : xs) {
    const std::string s = io::format_double(x);
    // strtod, not stod: stod throws out_of_range on the subnormal entry
    // even though the parse itself is exact.
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(std::memcmp(&back, &x, sizeof x) == 0);
  }
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-2.0) == "-2");
}

TEST_CASE("CSV writer emits exact bytes and checks the row width") {
  fs::path dir = fresh_dir("rossby_csv_test");
  fs::path file = dir / "t.csv";
  {
    io::CsvWriter w(file, {"a", "b"});
    w.row({1.0, 0.5});
    w.row({2.0, 0.25});
    CHECK_THROWS_AS(w.row({1.0}), ConfigError);
    CHECK_THROWS_AS(w.row({1.0, 2.0, 3.0}), ConfigError);
  }
  CHECK(slurp(file) == "a,b\n1,0.5\n2,0.25\n");
  CHECK_THROWS_AS(io::CsvWriter(dir / "no_such" / "t.csv", {"a"}),
                  ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("field snapshots round-trip bit-exactly with a sidecar") {
  fs::path dir = fresh_dir("rossby_field_test");
  auto g = Grid::make(16, 8, 2, 2.0 * pi, 4.0 * pi);
  ScalarField f = random_smooth(g, 3, 1, 5, 0.9);
  f.v[7] = 1e-307;  // subnormal-adjacent value survives the trip

  fs::path file = dir / "f.f64";
  io::write_field(file, f, "f");
  CHECK(fs::exists(file));
  CHECK(fs::exists(dir / "f.f64.json"));
  CHECK(fs::file_size(file) == f.v.size() * sizeof(double));

  ScalarField back = io::read_field(file);
  REQUIRE(back.grid->nx() == 16);
  REQUIRE(back.grid->ny() == 8);
  REQUIRE(back.grid->nz() == 2);
  CHECK(back.grid->lx() == g->lx());
  REQUIRE(back.v.size() == f.v.size());
  for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(back.v[i] == f.v[i]);

  // Truncated data, missing sidecar, corrupted sidecar.
  fs::resize_file(file, 16);
  CHECK_THROWS_AS(io::read_field(file), ConfigError);
  fs::remove(dir / "f.f64.json");
  CHECK_THROWS_AS(io::read_field(file), ConfigError);
  {
    std::ofstream bad(dir / "f.f64.json");
    bad << "{ not json";
  }
  CHECK_THROWS_AS(io::read_field(file), ConfigError);
  CHECK_THROWS_AS(io::read_field(dir / "missing.f64"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("config text parsing: comments, errors, typed getters") {
  io::Config c = io::Config::from_text(
      "# leading comment\n"
      "nx = 32   # trailing comment\n"
      "\n"
      "ratio = 0.5\n"
      "name = two_mode\n"
      "flag_on = on\n"
      "flag_off = 0\n"
      "eps = 0.4, 0.2 0.1\n",
      "test.cfg");
  CHECK(c.get_int("nx") == 32);
  CHECK(c.get_double("ratio") == 0.5);
  CHECK(c.get_string("name") == "two_mode");
  CHECK(c.get_bool("flag_on", false) == true);
  CHECK(c.get_bool("flag_off", true) == false);
  CHECK(c.get_bool("absent", true) == true);
  auto eps = c.get_double_list("eps");
  REQUIRE(eps.size() == 3);
  CHECK(eps[0] == 0.4);
  CHECK(eps[1] == 0.2);
  CHECK(eps[2] == 0.1);
  CHECK(c.get_int("absent_int", 7) == 7);
  CHECK(c.get_double("absent_double", 2.5) == 2.5);
  CHECK(c.get_string("absent_str", "dflt") == "dflt");
  CHECK_NOTHROW(c.finish());

  // Parse-time failures.
  CHECK_THROWS_AS(io::Config::from_text("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(io::Config::from_text("just a line\n"), ConfigError);
  CHECK_THROWS_AS(io::Config::from_text(" = 3\n"), ConfigError);
  CHECK_THROWS_AS(io::Config::from_file("/nonexistent/path.cfg"),
                  ConfigError);

  // Typed-getter failures.
  io::Config bad = io::Config::from_text(
      "f = 3.5\nb = maybe\ns = abc\nempty_list =\n");
  CHECK_THROWS_AS(bad.get_int("f"), ConfigError);
  CHECK_THROWS_AS(bad.get_bool("b", false), ConfigError);
  CHECK_THROWS_AS(bad.get_double("s"), ConfigError);
  CHECK_THROWS_AS(bad.get_double_list("empty_list"), ConfigError);
  CHECK_THROWS_AS(bad.get_double("missing"), ConfigError);

  // finish() names unconsumed keys with their line numbers.
  io::Config stale = io::Config::from_text("good = 1\ntypo_key = 2\n");
  CHECK(stale.get_int("good") == 1);
  try {
    stale.finish();
    FAIL("finish() should have thrown");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("typo_key") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
  }
}

TEST_CASE("run configuration parsing and validation") {
  io::Config c = io::Config::from_text(
      "nx = 16\nny = 16\nepsilons = 0.4, 0.2, 0.1\nt_end = 0.05\n"
      "family = well\ndata = two_mode\nout_dir = /tmp/rossby_cfg\n");
  harness::RunConfig cfg = harness::RunConfig::from_config(c);
  CHECK(cfg.nx == 16);
  CHECK(cfg.epsilons.size() == 3);
  CHECK(cfg.lx == doctest::Approx(4.0 * pi).epsilon(1e-15));

  // Unknown keys are rejected through finish().
  io::Config unk = io::Config::from_text(
      "epsilons = 0.4, 0.2, 0.1\nnot_a_knob = 1\n");
  CHECK_THROWS_AS(harness::RunConfig::from_config(unk), ConfigError);

  auto with = [](const std::string& extra) {
    io::Config cc = io::Config::from_text("epsilons = 0.4, 0.2, 0.1\n" +
                                          extra);
    return harness::RunConfig::from_config(cc);
  };
  CHECK_THROWS_AS(with("family = odd\n"), ConfigError);
  CHECK_THROWS_AS(with("data = bump\n"), ConfigError);  // bump is ill-only
  CHECK_THROWS_AS(with("cfl = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(with("t_end = 0\n"), ConfigError);
  CHECK_THROWS_AS(with("samples = 0\n"), ConfigError);
  CHECK_THROWS_AS(with("seed = -3\n"), ConfigError);
  CHECK_THROWS_AS(with("amplitude = -1\n"), ConfigError);

  io::Config inc = io::Config::from_text("epsilons = 0.1, 0.2\n");
  CHECK_THROWS_AS(harness::RunConfig::from_config(inc), ConfigError);
  io::Config big = io::Config::from_text("epsilons = 2.0, 1.0, 0.5\n");
  CHECK_THROWS_AS(harness::RunConfig::from_config(big), ConfigError);
}

TEST_CASE("zero-data sweep is exactly zero and reports cleanly") {
  fs::path out = fresh_dir("rossby_zero_sweep");
  harness::RunConfig cfg;
  cfg.nx = cfg.ny = 16;
  cfg.epsilons = {0.4, 0.2, 0.1};
  cfg.t_end = 0.05;
  cfg.samples = 2;
  cfg.family = "well";
  cfg.data = "zero";
  cfg.out_dir = out.string();

  harness::SweepSummary s = harness::run_sweep(cfg, 1);
  CHECK(s.exact_zero);
  CHECK_FALSE(s.failed);
  REQUIRE(s.runs.size() == 3);
  for (const auto& r : s.runs) {
    CHECK(r.initial_value == 0.0);
    CHECK(r.final_value == 0.0);
    CHECK(r.mass_drift == 0.0);
    CHECK(fs::exists(r.dir / "relative_energy.csv"));
    CHECK(fs::exists(r.dir / "monitors.csv"));
    CHECK(fs::exists(r.dir / "run.json"));
    CHECK(fs::exists(r.dir / "fields" / "rho_t0.f64"));
  }
  CHECK(fs::exists(out / "summary.json"));
  CHECK(harness::print_report(out));
  harness::emit_plots(cfg, s);
  CHECK(fs::exists(out / "plots" / "energy_vs_time.dat"));
  CHECK(fs::exists(out / "plots" / "final_vs_eps.dat"));
  fs::remove_all(out);
}

TEST_CASE("report rendering requires a summary") {
  CHECK_THROWS_AS(harness::print_report("/tmp/rossby_no_such_dir"),
                  ConfigError);
}

TEST_CASE("sweeps are deterministic and independent of the job count") {
  harness::RunConfig cfg;
  cfg.nx = cfg.ny = 16;
  cfg.epsilons = {0.4, 0.2, 0.1};
  cfg.t_end = 0.05;
  cfg.samples = 2;
  cfg.family = "well";
  cfg.data = "random";
  cfg.seed = 7;

  fs::path out1 = fresh_dir("rossby_det_serial");
  fs::path out2 = fresh_dir("rossby_det_parallel");
  cfg.out_dir = out1.string();
  harness::SweepSummary s1 = harness::run_sweep(cfg, 1);
  cfg.out_dir = out2.string();
  harness::SweepSummary s2 = harness::run_sweep(cfg, 3);

  REQUIRE(s1.runs.size() == s2.runs.size());
  for (std::size_t i = 0; i < s1.runs.size(); ++i) {
    CHECK(s1.runs[i].final_value == s2.runs[i].final_value);  // bitwise
    CHECK(slurp(s1.runs[i].dir / "relative_energy.csv") ==
          slurp(s2.runs[i].dir / "relative_energy.csv"));
  }
  CHECK(s1.fitted_rate == s2.fitted_rate);
  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("well-prepared smoke sweep decreases along the epsilon ladder") {
  fs::path out = fresh_dir("rossby_well_smoke");
  harness::RunConfig cfg;
  cfg.nx = cfg.ny = 16;
  cfg.epsilons = {0.4, 0.2, 0.1};
  cfg.t_end = 0.1;
  cfg.samples = 2;
  cfg.family = "well";
  cfg.data = "two_mode";
  cfg.amplitude = 0.05;
  cfg.out_dir = out.string();

  harness::SweepSummary s = harness::run_sweep(cfg, 1);  // throws if broken
  CHECK(s.monotone);
  CHECK_FALSE(s.exact_zero);
  CHECK(s.fitted_rate > 0.0);
  for (const auto& r : s.runs) {
    // E(0) is pure roundoff (can even dip negative in the summation).
    CHECK(std::abs(r.initial_value) <= 1e-14);
    CHECK(r.final_value > 0.0);
    CHECK(r.mass_drift <= 1e-10);
  }
  CHECK(harness::print_report(out));
  fs::remove_all(out);
}

TEST_CASE("ill-prepared smoke sweep: corrected beats uncorrected") {
  fs::path out = fresh_dir("rossby_ill_smoke");
  harness::RunConfig cfg;
  cfg.nx = cfg.ny = 32;
  cfg.epsilons = {0.4, 0.2, 0.1};
  cfg.t_end = 0.1;
  cfg.samples = 2;
  cfg.family = "ill";
  cfg.data = "random";
  cfg.amplitude = 0.05;
  cfg.seed = 42;
  cfg.out_dir = out.string();

  harness::SweepSummary s = harness::run_sweep(cfg, 1);
  REQUIRE(s.runs.size() == 3);
  REQUIRE(s.correction_ratios.size() == 3);
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    const auto& r = s.runs[i];
    CHECK(std::abs(r.initial_value) <= 1e-14);
    CHECK(r.final_value < r.final_value_uncorrected);
    CHECK(s.correction_ratios[i] < 1.0);
    CHECK(fs::exists(r.dir / "decay.csv"));
    CHECK(fs::exists(r.dir / "fields" / "q0_delta.f64"));
    CHECK(r.decay_sup_s.size() == r.times.size());
  }
  CHECK(harness::print_report(out));
  fs::remove_all(out);
}
