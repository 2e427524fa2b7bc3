// Command-line laboratory for the rotating low-Mach flow experiments:
// data generation, single-component runs, epsilon sweeps, and reports.
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rossby/acoustic.hpp"
#include "rossby/errors.hpp"
#include "rossby/euler.hpp"
#include "rossby/harness.hpp"
#include "rossby/initdata.hpp"
#include "rossby/io.hpp"
#include "rossby/operators.hpp"
#include "rossby/relative_energy.hpp"
#include "rossby/target.hpp"

namespace fs = std::filesystem;
using namespace rossby;

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 1;
};

harness::RunConfig load_config(const CommonArgs& args) {
  io::Config c = io::Config::from_file(args.config);
  harness::RunConfig cfg = harness::RunConfig::from_config(c);
  if (!args.out.empty()) cfg.out_dir = args.out;
  if (args.seed_set) cfg.seed = args.seed;
  return cfg;
}

// Initial data exactly as the harness builds it (2D generators, lifted onto
// the run grid when nz > 1).
struct BuiltData {
  euler::FlowState flow;
  ScalarField q0;  // stream function (well) or q0_delta (ill)
  std::optional<initdata::DataDecomposition> dec;  // ill only
  ScalarField rho1;                                // ill only
  VectorField u0;                                  // ill only
};

BuiltData build_data(const harness::RunConfig& cfg, const ScalingParams& p,
                     const GridPtr& g2, const GridPtr& g) {
  BuiltData b;
  if (cfg.family == "well") {
    if (cfg.data == "zero")
      b.q0 = initdata::stream_zero(g2);
    else if (cfg.data == "single_mode")
      b.q0 = initdata::stream_single_mode(g2, cfg.amplitude);
    else if (cfg.data == "two_mode")
      b.q0 = initdata::stream_two_mode(g2, cfg.amplitude);
    else if (cfg.data == "dipole")
      b.q0 = initdata::stream_gaussian_dipole(g2, cfg.amplitude);
    else
      b.q0 = initdata::stream_random_band(g2, cfg.amplitude, cfg.seed);
    b.flow = initdata::make_well_prepared(b.q0, p, g);
  } else {
    initdata::IllData d = cfg.data == "bump"
                              ? initdata::ill_divergent_bump(g2, cfg.amplitude)
                              : initdata::ill_random_band(g2, cfg.amplitude,
                                                          cfg.seed);
    const bool lift = g->nz() > 1;
    b.rho1 = lift ? spectral::lift_vertical(d.rho1, g) : d.rho1;
    b.u0 = VectorField(g);
    for (int c = 0; c < 3; ++c)
      b.u0[c] = lift ? spectral::lift_vertical(d.u[c], g) : d.u[c];
    b.flow = initdata::make_ill_prepared(b.rho1, b.u0, p);
    const double delta =
        cfg.delta > 0.0 ? cfg.delta : initdata::default_delta(*g);
    b.dec = initdata::decompose_ill_prepared(b.rho1, b.u0, delta, p);
    b.q0 = b.dec->q0_delta;
  }
  return b;
}

int do_gen_data(const harness::RunConfig& cfg) {
  const ScalingParams p = cfg.params(cfg.epsilons.front());
  const GridPtr g2 = Grid::make(cfg.nx, cfg.ny, 1, cfg.lx, cfg.ly);
  const GridPtr g =
      cfg.nz == 1 ? g2 : Grid::make(cfg.nx, cfg.ny, cfg.nz, cfg.lx, cfg.ly);
  const BuiltData b = build_data(cfg, p, g2, g);

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  io::write_field(dir / "rho0.f64", b.flow.rho, "rho0");
  io::write_field(dir / "m0_1.f64", b.flow.mom[0], "m0_1");
  io::write_field(dir / "m0_2.f64", b.flow.mom[1], "m0_2");
  io::write_field(dir / "m0_3.f64", b.flow.mom[2], "m0_3");
  io::write_field(dir / "q0.f64", b.q0, "q0");
  if (b.dec) {
    io::write_field(dir / "s0_delta.f64", b.dec->s0_delta, "s0_delta");
    io::write_field(dir / "V0_1.f64", b.dec->V0_delta[0], "V0_1");
    io::write_field(dir / "V0_2.f64", b.dec->V0_delta[1], "V0_2");
    io::write_field(dir / "V0_3.f64", b.dec->V0_delta[2], "V0_3");
  }
  std::printf("data written under %s\n", dir.string().c_str());
  return 0;
}

int do_run_euler(const harness::RunConfig& cfg) {
  const double eps = cfg.epsilons.front();
  const ScalingParams p = cfg.params(eps);
  const GridPtr g2 = Grid::make(cfg.nx, cfg.ny, 1, cfg.lx, cfg.ly);
  const GridPtr g =
      cfg.nz == 1 ? g2 : Grid::make(cfg.nx, cfg.ny, cfg.nz, cfg.lx, cfg.ly);
  BuiltData b = build_data(cfg, p, g2, g);

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  io::write_field(dir / "rho_t0.f64", b.flow.rho, "rho_t0");

  euler::IntegrateOptions opt;
  opt.cfl = cfg.cfl;
  opt.terms.hyper_nu = cfg.hyper_nu;
  opt.symmetrize = cfg.nz > 1;
  opt.fixed_dt = cfg.fixed_dt;

  euler::WeakFormMonitor mon(g, p, cfg.t_end);
  mon.sample(b.flow);
  const double energy0 = euler::total_energy(b.flow, p);
  io::CsvWriter csv(dir / "monitors.csv",
                    {"t", "mass", "energy", "energy_defect", "hyper_power",
                     "res_continuity", "res_momentum"});
  for (int k = 0; k <= cfg.samples; ++k) {
    const double tk =
        (k == cfg.samples) ? cfg.t_end : cfg.t_end * k / cfg.samples;
    if (k > 0) {
      euler::advance_to(b.flow, tk, p, opt);
      mon.sample(b.flow);
    }
    csv.row({b.flow.t, euler::total_mass(b.flow),
             euler::total_energy(b.flow, p),
             euler::total_energy(b.flow, p) - energy0,
             cfg.hyper_nu > 0.0
                 ? euler::hyperviscous_power(b.flow, p, cfg.hyper_nu)
                 : 0.0,
             mon.residual_continuity(), mon.residual_momentum()});
  }
  io::write_field(dir / "rho_tend.f64", b.flow.rho, "rho_tend");
  io::write_field(dir / "m1_tend.f64", b.flow.mom[0], "m1_tend");
  io::write_field(dir / "m2_tend.f64", b.flow.mom[1], "m2_tend");
  std::printf("flow run (eps=%g) written under %s\n", eps,
              dir.string().c_str());
  return 0;
}

int do_run_target(const harness::RunConfig& cfg) {
  const ScalingParams p = cfg.params(cfg.epsilons.front());
  const GridPtr g2 = Grid::make(cfg.nx, cfg.ny, 1, cfg.lx, cfg.ly);
  const GridPtr g =
      cfg.nz == 1 ? g2 : Grid::make(cfg.nx, cfg.ny, cfg.nz, cfg.lx, cfg.ly);
  const BuiltData b = build_data(cfg, p, g2, g);

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  io::write_field(dir / "q_t0.f64", b.q0, "q_t0");

  target::TargetState s(b.q0.grid);
  s.omega = target::omega_from_q(b.q0, p);
  io::CsvWriter csv(dir / "target.csv", {"t", "target_energy"});
  for (int k = 0; k <= cfg.samples; ++k) {
    const double tk =
        (k == cfg.samples) ? cfg.t_end : cfg.t_end * k / cfg.samples;
    if (k > 0) target::advance_to(s, tk, p, cfg.cfl, cfg.fixed_dt);
    csv.row({s.t, target::target_energy(target::q_from_omega(s.omega, p), p)});
  }
  io::write_field(dir / "q_tend.f64", target::q_from_omega(s.omega, p),
                  "q_tend");
  std::printf("limit-system run written under %s\n", dir.string().c_str());
  return 0;
}

int do_run_acoustic(const harness::RunConfig& cfg) {
  if (cfg.family != "ill")
    throw ConfigError(
        "run-acoustic needs family = ill (balanced data has no fast part)");
  const double eps = cfg.epsilons.front();
  const ScalingParams p = cfg.params(eps);
  const GridPtr g2 = Grid::make(cfg.nx, cfg.ny, 1, cfg.lx, cfg.ly);
  const GridPtr g =
      cfg.nz == 1 ? g2 : Grid::make(cfg.nx, cfg.ny, cfg.nz, cfg.lx, cfg.ly);
  const BuiltData b = build_data(cfg, p, g2, g);

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  acoustic::AcousticState z0(g);
  z0.s = b.dec->s0_delta;
  z0.V = b.dec->V0_delta;
  io::write_field(dir / "s_t0.f64", z0.s, "s_t0");

  const acoustic::Propagator prop(g, p);
  std::vector<double> times;
  for (int k = 0; k <= cfg.samples; ++k)
    times.push_back((k == cfg.samples) ? cfg.t_end
                                       : cfg.t_end * k / cfg.samples);
  const std::array<double, 4> box = {0.5 * cfg.lx - 0.5, 0.5 * cfg.lx + 0.5,
                                     0.5 * cfg.ly - 0.5, 0.5 * cfg.ly + 0.5};
  const auto decay = acoustic::local_decay_profile(prop, z0, box, times);

  io::CsvWriter csv(dir / "acoustic.csv",
                    {"t", "energy", "fast_energy", "sup_s", "sup_v"});
  acoustic::AcousticState z = z0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    z = prop.propagate(z0, times[k]);
    csv.row({z.t, acoustic::energy(z, p), prop.fast_energy(z),
             decay[k].sup_s, decay[k].sup_v});
  }
  io::write_field(dir / "s_tend.f64", z.s, "s_tend");
  std::printf("fast-wave run (eps=%g) written under %s\n", eps,
              dir.string().c_str());
  return 0;
}

int do_sweep(const harness::RunConfig& cfg, int jobs) {
  const harness::SweepSummary s = harness::run_sweep(cfg, jobs);
  harness::emit_plots(cfg, s);
  harness::print_report(cfg.out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rossby_lab: compressible rotating flow versus its planar limit "
      "(relative-energy laboratory)"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* sub, bool with_jobs) {
    sub->add_option("--config", args.config, "flat key = value config file")
        ->required();
    sub->add_option("--out", args.out, "output directory (overrides config)");
    auto* seed =
        sub->add_option("--seed", args.seed, "random seed (overrides config)");
    seed->each([&](const std::string&) { args.seed_set = true; });
    if (with_jobs)
      sub->add_option("--jobs", args.jobs, "parallel sweep workers")
          ->check(CLI::PositiveNumber);
  };

  CLI::App* gen = app.add_subcommand("gen-data", "write the initial data");
  add_common(gen, false);
  CLI::App* flow = app.add_subcommand(
      "run-euler", "integrate the compressible rotating flow only");
  add_common(flow, false);
  CLI::App* tgt =
      app.add_subcommand("run-target", "integrate the planar limit only");
  add_common(tgt, false);
  CLI::App* wave = app.add_subcommand(
      "run-acoustic", "propagate the fast-wave part exactly (ill data)");
  add_common(wave, false);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run the epsilon ladder and fit the convergence rate");
  add_common(sweep, true);
  CLI::App* report = app.add_subcommand(
      "report", "print the stored sweep summary from --out");
  std::string report_out = "out";
  report->add_option("--out", report_out, "sweep output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (report->parsed())
      return harness::print_report(report_out) ? 0 : 4;
    const harness::RunConfig cfg = load_config(args);
    if (gen->parsed()) return do_gen_data(cfg);
    if (flow->parsed()) return do_run_euler(cfg);
    if (tgt->parsed()) return do_run_target(cfg);
    if (wave->parsed()) return do_run_acoustic(cfg);
    if (sweep->parsed()) return do_sweep(cfg, args.jobs);
    std::fprintf(stderr, "no subcommand\n");
    return 2;
  } catch (const rossby::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const rossby::AcceptanceError& e) {
    std::fprintf(stderr, "acceptance assertion failed: %s\n", e.what());
    return 4;
  } catch (const rossby::NumericalError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
