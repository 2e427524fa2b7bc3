#pragma once

#include "rossby/acoustic.hpp"
#include "rossby/euler.hpp"
#include "rossby/grid.hpp"
#include "rossby/target.hpp"
#include "rossby/thermo.hpp"

namespace rossby::relenergy {

// Smooth comparison state: a positive density and a velocity field. rtilde
// stays near rho_bar (the builders keep it within the cutoff plateau, the
// periodic surrogate of compact support against the reference state).
struct TestState {
  ScalarField rtilde;
  VectorField utilde;
};

// Scaled distance between a flow state and a test state:
//   E = Int 1/2 rho |m/rho - utilde|^2
//         + (1/eps^2) [P(rho) - P(rtilde) - P'(rtilde)(rho - rtilde)].
// Nonnegative; zero exactly when rho = rtilde and m = rho utilde pointwise.
double relative_energy(const euler::FlowState& state, const TestState& test,
                       const ScalingParams& p);

// Value plus the four coercivity component integrals:
//   ess_velocity      = Int chi |m/rho - utilde|^2
//   res_kinetic       = Int (1 - chi) |m|^2 / rho
//   ess_density       = Int chi (rho - rtilde)^2
//   res_mass_pressure = Int (1 - chi) (1 + rho^gamma)
// with chi the density cutoff. Every evaluation asserts the provable lower
// bounds (throwing AcceptanceError on violation):
//   value >= (rho_bar/8) ess_velocity
//   value >= (c_conv/eps^2) ess_density
//   value >= (c_res/eps^2) res_mass_pressure
//   value >= c_eps * (sum of all four),
//   c_eps = 1 / [ 8/rho_bar + 4
//                 + eps^2 (1/c_conv + (1 + 2 |utilde|_max^2 K)/c_res) ],
// where c_conv, c_res, K are the numerically certified constants from the
// thermodynamics module (convexity constant, residual coercivity constant
// for the test state's density range, and residual density bound).
struct Report {
  double time = 0.0;
  double value = 0.0;
  double ess_velocity = 0.0;
  double res_kinetic = 0.0;
  double ess_density = 0.0;
  double res_mass_pressure = 0.0;
  double coercivity_constant = 0.0;  // the c_eps the assertion used
  double energy_defect = 0.0;        // E(t) - E(0); filled by the harness
  // Uniform-bound norms, reported (no a-priori constant to assert against):
  double norm_sqrt_rho_u = 0.0;      // || m / sqrt(rho) ||_L2
  double norm_density_fluct = 0.0;   // || (rho - rho_bar)/eps ||_L2
};

Report coercivity_report(const euler::FlowState& state, const TestState& test,
                         const ScalingParams& p,
                         const thermo::DensityCutoff& chi);

// Balanced comparison state from a limit-system state:
//   rtilde = rho_bar + eps q,   utilde = (p'(rho_bar)/rho_bar) perp_grad_h q
// (x3-independent; out_grid lifts onto a 3D grid). Positivity of rtilde is
// required.
TestState build_well_prepared_test(const target::TargetState& ts,
                                   const ScalingParams& p,
                                   const GridPtr& out_grid = nullptr);

// Comparison state with the fast-wave correction:
//   rtilde = rho_bar + eps (q + s),   utilde = (velocity_from_q(q), 0) + V,
// from a limit state and a fast-wave state at the same time on a common box.
TestState build_ill_prepared_test(const target::TargetState& ts,
                                  const acoustic::AcousticState& as,
                                  const ScalingParams& p);

}  // namespace rossby::relenergy
