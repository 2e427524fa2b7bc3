#include "rossby/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <thread>

#include "json.hpp"
#include "rossby/acoustic.hpp"
#include "rossby/errors.hpp"
#include "rossby/euler.hpp"
#include "rossby/initdata.hpp"
#include "rossby/operators.hpp"
#include "rossby/relative_energy.hpp"
#include "rossby/target.hpp"

namespace rossby::harness {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig RunConfig::from_config(io::Config& c) {
  RunConfig r;
  r.nx = static_cast<int>(c.get_int("nx", r.nx));
  r.ny = static_cast<int>(c.get_int("ny", r.ny));
  r.nz = static_cast<int>(c.get_int("nz", r.nz));
  r.lx = c.get_double("lx", r.lx);
  r.ly = c.get_double("ly", r.ly);
  r.a = c.get_double("a", r.a);
  r.gamma = c.get_double("gamma", r.gamma);
  r.rho_bar = c.get_double("rho_bar", r.rho_bar);
  r.epsilons = c.get_double_list("epsilons");
  r.t_end = c.get_double("t_end", r.t_end);
  r.cfl = c.get_double("cfl", r.cfl);
  r.fixed_dt = c.get_double("fixed_dt", r.fixed_dt);
  r.family = c.get_string("family", r.family);
  r.data = c.get_string("data", r.data);
  r.amplitude = c.get_double("amplitude", r.amplitude);
  r.delta = c.get_double("delta", r.delta);
  r.hyper_nu = c.get_double("hyper_nu", r.hyper_nu);
  r.samples = static_cast<int>(c.get_int("samples", r.samples));
  const long long seed = c.get_int("seed", static_cast<long long>(r.seed));
  if (seed < 0) throw ConfigError("seed must be non-negative");
  r.seed = static_cast<std::uint64_t>(seed);
  r.out_dir = c.get_string("out_dir", r.out_dir);
  c.finish();
  r.validate();
  return r;
}

void RunConfig::validate() const {
  if (epsilons.empty()) throw ConfigError("epsilons must not be empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] <= 1.0))
      throw ConfigError("every epsilon must lie in (0, 1]");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw ConfigError("epsilons must be strictly decreasing");
  }
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (fixed_dt < 0.0) throw ConfigError("fixed_dt must be >= 0");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (family != "well" && family != "ill")
    throw ConfigError("family must be 'well' or 'ill', got '" + family + "'");
  if (family == "well") {
    if (data != "zero" && data != "single_mode" && data != "two_mode" &&
        data != "dipole" && data != "random")
      throw ConfigError(
          "well-prepared data must be one of zero|single_mode|two_mode|"
          "dipole|random, got '" +
          data + "'");
  } else {
    if (data != "bump" && data != "random")
      throw ConfigError("ill-prepared data must be one of bump|random, got '" +
                        data + "'");
  }
  if (!(amplitude >= 0.0)) throw ConfigError("amplitude must be >= 0");
  if (delta < 0.0) throw ConfigError("delta must be >= 0");
  if (hyper_nu < 0.0) throw ConfigError("hyper_nu must be >= 0");
  // Grid shape constraints are enforced by Grid::make.
  ScalingParams p{epsilons.front(), a, gamma, rho_bar};
  p.validate();
}

ScalingParams RunConfig::params(double epsilon) const {
  ScalingParams p{epsilon, a, gamma, rho_bar};
  p.validate();
  return p;
}

namespace {

ScalarField make_stream(const RunConfig& cfg, const GridPtr& g2) {
  if (cfg.data == "zero") return initdata::stream_zero(g2);
  if (cfg.data == "single_mode")
    return initdata::stream_single_mode(g2, cfg.amplitude);
  if (cfg.data == "two_mode")
    return initdata::stream_two_mode(g2, cfg.amplitude);
  if (cfg.data == "dipole")
    return initdata::stream_gaussian_dipole(g2, cfg.amplitude);
  if (cfg.data == "random")
    return initdata::stream_random_band(g2, cfg.amplitude, cfg.seed);
  throw ConfigError("unknown well-prepared data family: " + cfg.data);
}

initdata::IllData make_ill(const RunConfig& cfg, const GridPtr& g2) {
  if (cfg.data == "bump")
    return initdata::ill_divergent_bump(g2, cfg.amplitude);
  if (cfg.data == "random")
    return initdata::ill_random_band(g2, cfg.amplitude, cfg.seed);
  throw ConfigError("unknown ill-prepared data family: " + cfg.data);
}

std::string run_label(int index, double epsilon) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "run%d_eps%g", index, epsilon);
  return buf;
}

// Least squares for log(final) = log(C) + p*log(eps), over positive finals.
void fit_rate(SweepSummary& s) {
  std::vector<double> xs, ys;
  for (const RunResult& r : s.runs)
    if (r.final_value > 0.0) {
      xs.push_back(std::log(r.epsilon));
      ys.push_back(std::log(r.final_value));
    }
  s.exact_zero = xs.empty();
  if (xs.size() < 2) return;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return;
  s.fitted_rate = (n * sxy - sx * sy) / denom;
  s.fitted_constant = std::exp((sy - s.fitted_rate * sx) / n);
}

json run_to_json(const RunResult& r) {
  return json{{"epsilon", r.epsilon},
              {"initial_value", r.initial_value},
              {"final_value", r.final_value},
              {"final_value_uncorrected", r.final_value_uncorrected},
              {"mass_drift", r.mass_drift},
              {"energy_defect_max", r.energy_defect_max},
              {"res_continuity", r.res_continuity},
              {"res_momentum", r.res_momentum},
              {"dir", r.dir.string()},
              {"times", r.times},
              {"values", r.values},
              {"values_uncorrected", r.values_uncorrected}};
}

void write_summary_json(const RunConfig& cfg, const SweepSummary& s) {
  json j;
  j["config"] = json{{"nx", cfg.nx},
                     {"ny", cfg.ny},
                     {"nz", cfg.nz},
                     {"lx", cfg.lx},
                     {"ly", cfg.ly},
                     {"a", cfg.a},
                     {"gamma", cfg.gamma},
                     {"rho_bar", cfg.rho_bar},
                     {"epsilons", cfg.epsilons},
                     {"t_end", cfg.t_end},
                     {"cfl", cfg.cfl},
                     {"fixed_dt", cfg.fixed_dt},
                     {"family", cfg.family},
                     {"data", cfg.data},
                     {"amplitude", cfg.amplitude},
                     {"delta", cfg.delta},
                     {"hyper_nu", cfg.hyper_nu},
                     {"samples", cfg.samples},
                     {"seed", cfg.seed},
                     {"out_dir", cfg.out_dir}};
  j["runs"] = json::array();
  for (const RunResult& r : s.runs) j["runs"].push_back(run_to_json(r));
  j["fit"] = json{{"rate", s.fitted_rate}, {"constant", s.fitted_constant}};
  j["monotone"] = s.monotone;
  j["exact_zero"] = s.exact_zero;
  j["correction_ratios"] = s.correction_ratios;
  j["failed"] = s.failed;
  j["error"] = s.error;

  fs::create_directories(cfg.out_dir);
  std::ofstream out(fs::path(cfg.out_dir) / "summary.json", std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out)
    throw ConfigError("cannot write sweep summary under " + cfg.out_dir);
}

}  // namespace

RunResult run_single(const RunConfig& cfg, double epsilon,
                     const std::string& label) {
  cfg.validate();
  const ScalingParams p = cfg.params(epsilon);
  const GridPtr g2 = Grid::make(cfg.nx, cfg.ny, 1, cfg.lx, cfg.ly);
  const GridPtr g =
      cfg.nz == 1 ? g2 : Grid::make(cfg.nx, cfg.ny, cfg.nz, cfg.lx, cfg.ly);
  const bool ill = cfg.family == "ill";

  const fs::path dir = fs::path(cfg.out_dir) / label;
  fs::create_directories(dir / "fields");

  euler::FlowState flow;
  target::TargetState tgt(g2);
  std::optional<acoustic::Propagator> prop;
  acoustic::AcousticState wave0;

  if (!ill) {
    const ScalarField q0 = make_stream(cfg, g2);
    flow = initdata::make_well_prepared(q0, p, g);
    tgt.omega = target::omega_from_q(q0, p);
    io::write_field(dir / "fields" / "q0.f64", q0, "q0");
  } else {
    const initdata::IllData d = make_ill(cfg, g2);
    const bool lift = cfg.nz > 1;
    ScalarField r = lift ? spectral::lift_vertical(d.rho1, g) : d.rho1;
    VectorField u(g);
    for (int c = 0; c < 3; ++c)
      u[c] = lift ? spectral::lift_vertical(d.u[c], g) : d.u[c];
    flow = initdata::make_ill_prepared(r, u, p);
    const double delta =
        cfg.delta > 0.0 ? cfg.delta : initdata::default_delta(*g);
    const initdata::DataDecomposition dec =
        initdata::decompose_ill_prepared(r, u, delta, p);
    tgt.omega = target::omega_from_q(dec.q0_delta, p);
    wave0 = acoustic::AcousticState(g);
    wave0.s = dec.s0_delta;
    wave0.V = dec.V0_delta;
    prop.emplace(g, p);
    io::write_field(dir / "fields" / "q0_delta.f64", dec.q0_delta, "q0_delta");
    io::write_field(dir / "fields" / "s0_delta.f64", dec.s0_delta, "s0_delta");
    io::write_field(dir / "fields" / "V0_1.f64", dec.V0_delta[0], "V0_1");
    io::write_field(dir / "fields" / "V0_2.f64", dec.V0_delta[1], "V0_2");
  }
  io::write_field(dir / "fields" / "rho_t0.f64", flow.rho, "rho_t0");

  euler::IntegrateOptions opt;
  opt.cfl = cfg.cfl;
  opt.terms.hyper_nu = cfg.hyper_nu;
  opt.symmetrize = cfg.nz > 1;
  opt.fixed_dt = cfg.fixed_dt;

  const thermo::DensityCutoff chi(p.rho_bar);
  euler::WeakFormMonitor mon(g, p, cfg.t_end);
  mon.sample(flow);
  const double energy0 = euler::total_energy(flow, p);
  const double mass0 = euler::total_mass(flow);

  std::vector<std::string> re_cols = {
      "t",           "value",          "ess_velocity",
      "res_kinetic", "ess_density",    "res_mass_pressure",
      "coercivity",  "energy_defect",  "norm_sqrt_rho_u",
      "norm_density_fluct"};
  if (ill) re_cols.push_back("value_uncorrected");
  io::CsvWriter re_csv(dir / "relative_energy.csv", re_cols);
  io::CsvWriter mon_csv(dir / "monitors.csv",
                        {"t", "mass", "energy", "energy_defect", "hyper_power",
                         "res_continuity", "res_momentum"});

  RunResult res;
  res.epsilon = epsilon;
  res.dir = dir;

  for (int k = 0; k <= cfg.samples; ++k) {
    const double tk =
        (k == cfg.samples) ? cfg.t_end : cfg.t_end * k / cfg.samples;
    if (k > 0) {
      euler::advance_to(flow, tk, p, opt);
      target::advance_to(tgt, tk, p, cfg.cfl, cfg.fixed_dt);
      mon.sample(flow);
    }

    relenergy::TestState test;
    double uncorrected = 0.0;
    if (ill) {
      acoustic::AcousticState w = prop->propagate(wave0, tk);
      w.t = tgt.t;  // both equal tk; align the stamps exactly
      test = relenergy::build_ill_prepared_test(tgt, w, p);
      uncorrected = relenergy::relative_energy(
          flow, relenergy::build_well_prepared_test(tgt, p, g), p);
    } else {
      test = relenergy::build_well_prepared_test(tgt, p, g);
    }

    relenergy::Report rep = relenergy::coercivity_report(flow, test, p, chi);
    rep.energy_defect = euler::total_energy(flow, p) - energy0;
    const double hyper_power =
        cfg.hyper_nu > 0.0 ? euler::hyperviscous_power(flow, p, cfg.hyper_nu)
                           : 0.0;
    const double mass = euler::total_mass(flow);

    std::vector<double> row = {rep.time,
                               rep.value,
                               rep.ess_velocity,
                               rep.res_kinetic,
                               rep.ess_density,
                               rep.res_mass_pressure,
                               rep.coercivity_constant,
                               rep.energy_defect,
                               rep.norm_sqrt_rho_u,
                               rep.norm_density_fluct};
    if (ill) row.push_back(uncorrected);
    re_csv.row(row);
    mon_csv.row({flow.t, mass, euler::total_energy(flow, p),
                 rep.energy_defect, hyper_power, mon.residual_continuity(),
                 mon.residual_momentum()});

    res.times.push_back(tk);
    res.values.push_back(rep.value);
    if (ill) res.values_uncorrected.push_back(uncorrected);
    res.mass_drift =
        std::max(res.mass_drift,
                 std::abs(mass - mass0) / std::max(1.0, std::abs(mass0)));
    res.energy_defect_max =
        std::max(res.energy_defect_max, rep.energy_defect);
  }

  res.initial_value = res.values.front();
  res.final_value = res.values.back();
  if (ill) res.final_value_uncorrected = res.values_uncorrected.back();
  res.res_continuity = mon.residual_continuity();
  res.res_momentum = mon.residual_momentum();

  io::write_field(dir / "fields" / "rho_tend.f64", flow.rho, "rho_tend");
  io::write_field(dir / "fields" / "m1_tend.f64", flow.mom[0], "m1_tend");
  io::write_field(dir / "fields" / "m2_tend.f64", flow.mom[1], "m2_tend");
  io::write_field(dir / "fields" / "q_tend.f64",
                  target::q_from_omega(tgt.omega, p), "q_tend");

  if (ill) {
    const std::array<double, 4> box = {0.5 * cfg.lx - 0.5, 0.5 * cfg.lx + 0.5,
                                       0.5 * cfg.ly - 0.5, 0.5 * cfg.ly + 0.5};
    const auto decay =
        acoustic::local_decay_profile(*prop, wave0, box, res.times);
    io::CsvWriter decay_csv(dir / "decay.csv",
                            {"t", "sup_s", "sup_v", "energy"});
    for (const auto& d : decay) {
      decay_csv.row({d.t, d.sup_s, d.sup_v, d.energy});
      res.decay_sup_s.push_back(d.sup_s);
      res.decay_sup_v.push_back(d.sup_v);
    }
  }

  std::ofstream run_json(dir / "run.json", std::ios::binary);
  run_json << run_to_json(res).dump(2) << '\n';
  if (!run_json)
    throw ConfigError("cannot write run summary under " + dir.string());
  return res;
}

SweepSummary run_sweep(const RunConfig& cfg, int jobs) {
  cfg.validate();
  const int n = static_cast<int>(cfg.epsilons.size());
  if (n < 3)
    throw ConfigError("a sweep needs at least 3 epsilon values for the fit");

  SweepSummary s;
  s.runs.resize(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) break;
      try {
        s.runs[i] = run_single(cfg, cfg.epsilons[i],
                               run_label(i, cfg.epsilons[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  jobs = std::clamp(jobs, 1, n);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::exception_ptr first_error;
  for (int i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    first_error = errors[i];
    s.failed = true;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      s.error = std::string("member run ") + run_label(i, cfg.epsilons[i]) +
                " failed: " + e.what();
    }
    break;
  }

  if (!s.failed) {
    fit_rate(s);
    s.monotone = true;
    for (int i = 0; i + 1 < n; ++i)
      if (!(s.runs[i].final_value > s.runs[i + 1].final_value))
        s.monotone = false;
    if (cfg.family == "ill") {
      for (const RunResult& r : s.runs) {
        const double u = r.final_value_uncorrected;
        s.correction_ratios.push_back(
            u > 0.0 ? r.final_value / u : (r.final_value > 0.0 ? 1e300 : 1.0));
      }
    }
  }

  write_summary_json(cfg, s);
  if (first_error) std::rethrow_exception(first_error);
  if (!s.exact_zero && !s.monotone)
    throw AcceptanceError(
        "sweep: final relative energy is not strictly decreasing along the "
        "epsilon ladder");
  return s;
}

void emit_plots(const RunConfig& cfg, const SweepSummary& s) {
  if (s.runs.empty()) {
    std::fprintf(stderr, "warning: empty sweep, no plot data emitted\n");
    return;
  }
  const fs::path dir = fs::path(cfg.out_dir) / "plots";
  fs::create_directories(dir);

  {
    std::ofstream out(dir / "energy_vs_time.dat", std::ios::binary);
    out << "# t";
    for (const RunResult& r : s.runs)
      out << "  value[eps=" << io::format_double(r.epsilon) << "]";
    out << '\n';
    const std::size_t rows = s.runs.front().times.size();
    for (std::size_t k = 0; k < rows; ++k) {
      out << io::format_double(s.runs.front().times[k]);
      for (const RunResult& r : s.runs)
        out << ' ' << io::format_double(r.values[k]);
      out << '\n';
    }
    std::ofstream gp(dir / "energy_vs_time.gp", std::ios::binary);
    gp << "set logscale y\nset xlabel 't'\nset ylabel 'relative energy'\n"
       << "plot for [i=2:" << (1 + s.runs.size())
       << "] 'energy_vs_time.dat' using 1:i with lines title sprintf('run "
          "%d', i-2)\n";
  }

  {
    std::ofstream out(dir / "final_vs_eps.dat", std::ios::binary);
    out << "# epsilon final_E fitted_line\n";
    for (const RunResult& r : s.runs) {
      const double fitted =
          s.fitted_constant * std::pow(r.epsilon, s.fitted_rate);
      out << io::format_double(r.epsilon) << ' '
          << io::format_double(r.final_value) << ' '
          << io::format_double(fitted) << '\n';
    }
    std::ofstream gp(dir / "final_vs_eps.gp", std::ios::binary);
    gp << "set logscale xy\nset xlabel 'epsilon'\nset ylabel 'final E'\n"
       << "plot 'final_vs_eps.dat' using 1:2 with points title 'measured', "
          "'' using 1:3 with lines title 'fit'\n";
  }

  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    const RunResult& r = s.runs[i];
    if (r.decay_sup_s.empty()) continue;
    char name[64];
    std::snprintf(name, sizeof name, "decay_run%zu.dat", i);
    std::ofstream out(dir / name, std::ios::binary);
    out << "# t sup_s sup_v   (eps=" << io::format_double(r.epsilon) << ")\n";
    for (std::size_t k = 0; k < r.decay_sup_s.size(); ++k)
      out << io::format_double(r.times[k]) << ' '
          << io::format_double(r.decay_sup_s[k]) << ' '
          << io::format_double(r.decay_sup_v[k]) << '\n';
  }
  if (!s.runs.front().decay_sup_s.empty()) {
    std::ofstream gp(dir / "decay_profile.gp", std::ios::binary);
    gp << "set xlabel 't'\nset ylabel 'local sup'\n"
       << "plot 'decay_run0.dat' using 1:2 with lines title 'sup_s', "
          "'' using 1:3 with lines title 'sup_v'\n";
  }
}

bool print_report(const fs::path& out_dir) {
  std::ifstream in(out_dir / "summary.json", std::ios::binary);
  if (!in)
    throw ConfigError("no summary.json under " + out_dir.string() +
                      " (run the sweep first)");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("bad summary.json: " + std::string(e.what()));
  }

  const json& c = j.at("config");
  std::printf("sweep: family=%s data=%s grid=%dx%dx%d box=%gx%g t_end=%g\n",
              c.at("family").get<std::string>().c_str(),
              c.at("data").get<std::string>().c_str(), c.at("nx").get<int>(),
              c.at("ny").get<int>(), c.at("nz").get<int>(),
              c.at("lx").get<double>(), c.at("ly").get<double>(),
              c.at("t_end").get<double>());
  std::printf("%-10s  %-13s  %-13s  %-13s  %-12s\n", "epsilon", "E(0)",
              "E(t_end)", "E uncorrected", "mass drift");
  for (const json& r : j.at("runs")) {
    std::printf("%-10g  %-13.6g  %-13.6g  %-13.6g  %-12.3g\n",
                r.at("epsilon").get<double>(),
                r.at("initial_value").get<double>(),
                r.at("final_value").get<double>(),
                r.at("final_value_uncorrected").get<double>(),
                r.at("mass_drift").get<double>());
  }
  if (j.at("exact_zero").get<bool>()) {
    std::printf("exact-zero sweep: every final relative energy is 0\n");
  } else {
    std::printf("fit: E ~ C eps^p, p=%.4g, C=%.4g; strictly decreasing: %s\n",
                j.at("fit").at("rate").get<double>(),
                j.at("fit").at("constant").get<double>(),
                j.at("monotone").get<bool>() ? "yes" : "no");
  }
  const auto& ratios = j.at("correction_ratios");
  if (!ratios.empty()) {
    std::printf("fast-wave correction ratios (corrected/uncorrected):");
    for (const json& x : ratios) std::printf(" %.4g", x.get<double>());
    std::printf("\n");
  }
  if (j.at("failed").get<bool>()) {
    std::printf("sweep FAILED: %s\n", j.at("error").get<std::string>().c_str());
    return false;
  }
  return true;
}

}  // namespace rossby::harness
