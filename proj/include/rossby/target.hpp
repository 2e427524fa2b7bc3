#pragma once

#include "rossby/grid.hpp"
#include "rossby/thermo.hpp"

namespace rossby::target {

// Two-dimensional limit dynamics: the potential vorticity
//   omega = Lap_h q - q / p'(rho_bar)
// is transported by the stream-function velocity,
//   dt omega + (perp_grad_h q . grad_h) omega = 0,
// with q recovered from omega by a Helmholtz solve. States live on nz = 1
// grids.
struct TargetState {
  double t = 0.0;
  ScalarField omega;

  TargetState() = default;
  explicit TargetState(const GridPtr& g2d);
  const GridPtr& grid() const { return omega.grid; }
};

// Solve (-Lap_h + 1/p'(rho_bar)) q = -omega.
ScalarField q_from_omega(const ScalarField& omega, const ScalingParams& p);
ScalarField omega_from_q(const ScalarField& q, const ScalingParams& p);

// Geostrophically balanced velocity (p'(rho_bar)/rho_bar) perp_grad_h q,
// horizontal (third component zero).
VectorField velocity_from_q(const ScalarField& q, const ScalingParams& p);

// max over grid of |(p'(rho_bar)/rho_bar) grad_h q + b x v|.
double balance_residual(const ScalarField& q, const VectorField& v,
                        const ScalingParams& p);

// -(perp_grad_h q . grad_h) omega, product dealiased.
TargetState target_rhs(const TargetState& s, const ScalingParams& p);

// Advective CFL step (huge when the state is at rest).
double stable_dt(const TargetState& s, const ScalingParams& p, double cfl);

TargetState step_rk4(const TargetState& s, double dt, const ScalingParams& p);
void advance_to(TargetState& s, double t_target, const ScalingParams& p,
                double cfl, double fixed_dt = 0.0);

// Int |grad_h q|^2 + |q|^2 / p'(rho_bar); conserved by the dynamics.
double target_energy(const ScalarField& q, const ScalingParams& p);

}  // namespace rossby::target
