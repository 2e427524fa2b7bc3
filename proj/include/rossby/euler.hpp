#pragma once

#include <functional>
#include <vector>

#include "rossby/grid.hpp"
#include "rossby/thermo.hpp"

namespace rossby::euler {

// Conservative state of the scaled rotating compressible flow
//   dt rho = -div m
//   dt m   = -div(m (x) m / rho) - (1/eps^2) grad p(rho) - (1/eps) b x m
// with b = e3, so b x m = (-m2, m1, 0).
struct FlowState {
  double t = 0.0;
  ScalarField rho;
  VectorField mom;

  FlowState() = default;
  FlowState(const GridPtr& g) : rho(g), mom(g) {}
  const GridPtr& grid() const { return rho.grid; }
};

// Term toggles (test hooks) and optional spectral stabilization. hyper_nu is
// the coefficient of an extra -nu (-Lap)^4 term in both equations; zero (the
// default) disables it.
struct EulerTerms {
  bool convection = true;
  bool pressure = true;
  bool rotation = true;
  bool mass_flux = true;
  double hyper_nu = 0.0;
};

// Pointwise velocity m/rho. Throws NumericalError if min rho <= 0.
VectorField velocity(const FlowState& s, const ScalingParams& p);

// Right-hand side; nonlinear products are evaluated pointwise and dealiased
// (2/3 rule) before differentiation. Throws on loss of density positivity.
FlowState euler_rhs(const FlowState& s, const ScalingParams& p,
                    const EulerTerms& terms = {});

// CFL time step: cfl * h / (max|m/rho| + max sqrt(p'(rho))/eps + h/eps),
// h the smallest grid spacing. cfl must lie in (0, 1].
double stable_dt(const FlowState& s, const ScalingParams& p, double cfl);

// One classical RK4 step; the result is dealiased, and projected onto the
// slab symmetry class when symmetrize is set.
FlowState step_rk4(const FlowState& s, double dt, const ScalingParams& p,
                   const EulerTerms& terms = {}, bool symmetrize = false);

struct IntegrateOptions {
  double cfl = 0.5;
  EulerTerms terms{};
  bool symmetrize = false;
  double fixed_dt = 0.0;  // > 0: override the CFL step
};

// Advance to t_target (exactly, shrinking the final step). When the
// hyperviscous term is enabled the step is additionally capped so the
// stiffest retained mode stays inside the explicit stability interval;
// fixed_dt bypasses every cap and is the caller's responsibility.
void advance_to(FlowState& s, double t_target, const ScalingParams& p,
                const IntegrateOptions& opt = {});

double total_mass(const FlowState& s);
// E = Int 1/2 |m|^2/rho + (1/eps^2) (P(rho) - P(rho_bar) - P'(rho_bar)(rho - rho_bar)).
double total_energy(const FlowState& s, const ScalingParams& p);
double kinetic_energy(const FlowState& s, const ScalingParams& p);

// Instantaneous energy drain of the hyperviscosity term (exact functional
// derivative of the total energy against the -nu (-Lap)^4 contributions);
// recorded by the harness so the energy-defect series stays interpretable.
double hyperviscous_power(const FlowState& s, const ScalingParams& p,
                          double hyper_nu);

// Accumulates the weak-form defect of both equations against a fixed battery
// of smooth space-time test functions (localized periodic bumps times a C^1
// window in time). Call sample() at t = 0 and then after every advance; the
// time integrals use trapezoid accumulation between samples, so the reported
// residuals converge at the sampling/scheme order under refinement.
class WeakFormMonitor {
 public:
  WeakFormMonitor(const GridPtr& grid, const ScalingParams& p, double horizon);

  void sample(const FlowState& s);
  double residual_continuity() const { return res_cont_; }
  double residual_momentum() const { return res_mom_; }

 private:
  double window(double t) const;
  double window_dt(double t) const;
  double integrand_continuity(const FlowState& s) const;
  double integrand_momentum(const FlowState& s) const;
  double boundary_continuity(const FlowState& s) const;
  double boundary_momentum(const FlowState& s) const;

  ScalingParams params_;
  double horizon_;
  ScalarField g_c_;      // continuity test profile
  VectorField grad_gc_;
  VectorField g_m_;      // momentum test profile (horizontal components)
  VectorField grad_g1_, grad_g2_;
  ScalarField div_gm_;
  bool have_prev_ = false;
  double prev_t_ = 0.0;
  double prev_int_c_ = 0.0, prev_int_m_ = 0.0;
  double acc_c_ = 0.0, acc_m_ = 0.0;
  double init_b_c_ = 0.0, init_b_m_ = 0.0;
  double res_cont_ = 0.0, res_mom_ = 0.0;
};

}  // namespace rossby::euler
