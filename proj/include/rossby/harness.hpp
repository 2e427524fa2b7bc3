#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rossby/io.hpp"
#include "rossby/thermo.hpp"

namespace rossby::harness {

// One experiment description: grid, gas parameters, the epsilon ladder, the
// data family, and output knobs. Parsed from flat key = value text; unknown
// keys are rejected.
struct RunConfig {
  int nx = 64, ny = 64, nz = 1;
  double lx = 12.566370614359172, ly = 12.566370614359172;  // 4*pi box
  double a = 0.5, gamma = 2.0, rho_bar = 1.0;
  std::vector<double> epsilons;  // strictly decreasing, all in (0, 1]
  double t_end = 0.5;
  double cfl = 0.4;
  double fixed_dt = 0.0;  // > 0 overrides the CFL step of the flow solver
  std::string family = "well";        // "well" | "ill"
  std::string data = "single_mode";   // well: zero|single_mode|two_mode|
                                      //        dipole|random
                                      // ill:  bump|random
  double amplitude = 0.05;
  double delta = 0.0;    // ill regularization; 0 = default (half the cutoff)
  double hyper_nu = 0.0; // spectral stabilization coefficient; 0 = off
  int samples = 10;      // number of sample intervals in (0, t_end]
  std::uint64_t seed = 42;
  std::string out_dir = "out";

  // Reads every recognized key and then rejects leftovers.
  static RunConfig from_config(io::Config& c);
  void validate() const;
  ScalingParams params(double epsilon) const;
};

// Artifacts and headline numbers of a single-epsilon run.
struct RunResult {
  double epsilon = 0.0;
  double initial_value = 0.0;            // E(0) against the comparison state
  double final_value = 0.0;              // E(t_end), same test state
  double final_value_uncorrected = 0.0;  // ill only: wave part omitted
  double mass_drift = 0.0;               // max relative drift of total mass
  double energy_defect_max = 0.0;        // max over samples of E(t) - E(0)
  double res_continuity = 0.0;           // weak-form residuals at t_end
  double res_momentum = 0.0;
  std::vector<double> times;             // sample times (shared shape per sweep)
  std::vector<double> values;            // E(t) series
  std::vector<double> values_uncorrected;  // ill only, else empty
  std::vector<double> decay_sup_s;       // ill only: probe-box sup of |s|
  std::vector<double> decay_sup_v;       // ill only: probe-box sup of |V|
  std::filesystem::path dir;             // artifact directory of this run
};

// Integrates the flow and the limit system side by side (plus the exact
// fast-wave propagator for ill data), evaluates the relative energy against
// the family's comparison state at every sample time, and writes the run's
// CSV and snapshot artifacts under cfg.out_dir/<run label>.
RunResult run_single(const RunConfig& cfg, double epsilon,
                     const std::string& label);

struct SweepSummary {
  std::vector<RunResult> runs;           // ordered as cfg.epsilons
  double fitted_rate = 0.0;              // p in final E ~ C eps^p
  double fitted_constant = 0.0;          // C
  bool monotone = false;                 // strictly decreasing finals
  bool exact_zero = false;               // all finals exactly zero
  std::vector<double> correction_ratios; // ill: corrected/uncorrected finals
  bool failed = false;
  std::string error;                     // first member failure, if any
};

// Runs one member per epsilon (in `jobs` parallel workers), fits the
// convergence rate on log-log axes, asserts the strict decrease of the
// final relative energy along the epsilon ladder (unless the sweep is
// exactly zero), and writes cfg.out_dir/summary.json. A member failure is
// recorded in the summary and rethrown after the summary is written.
SweepSummary run_sweep(const RunConfig& cfg, int jobs);

// Gnuplot-ready data files and script stubs: E(t) per epsilon, final E vs
// epsilon (log-log, with the fitted line as a third column), and the
// fast-wave local-decay profile when one was recorded. A sweep without runs
// only warns.
void emit_plots(const RunConfig& cfg, const SweepSummary& s);

// Reads cfg.out_dir/summary.json (written by run_sweep) and renders the
// human-readable sweep table to stdout. Returns false when the stored sweep
// was marked failed.
bool print_report(const std::filesystem::path& out_dir);

}  // namespace rossby::harness
