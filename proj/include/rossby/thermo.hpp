#pragma once

#include <utility>

#include "rossby/grid.hpp"

namespace rossby {

// Physical and scaling parameters of the rotating isentropic gas:
// pressure law p(rho) = a * rho^gamma, reference density rho_bar, and the
// simultaneous Mach/Rossby scale epsilon.
struct ScalingParams {
  double epsilon = 1.0;
  double a = 1.0;
  double gamma = 2.0;
  double rho_bar = 1.0;

  void validate() const;
  // p'(rho_bar) = a * gamma * rho_bar^(gamma-1): squared sound speed at the
  // reference density; also the stiffness constant of the limit system.
  double sound_speed_sq() const;
};

namespace thermo {

double pressure(double rho, const ScalingParams& p);             // a rho^gamma
double pressure_derivative(double rho, const ScalingParams& p);  // p'(rho)

// Pressure potential P(rho) = rho * Int_{rho_bar}^{rho} p(z)/z^2 dz, in closed
// form a/(gamma-1) * (rho^gamma - rho * rho_bar^(gamma-1)), extended
// continuously by P(0) = 0. Satisfies rho P'(rho) - P(rho) = p(rho) and
// rho P''(rho) = p'(rho).
double pressure_potential(double rho, const ScalingParams& p);
double pressure_potential_derivative(double rho, const ScalingParams& p);
double pressure_potential_second(double rho, const ScalingParams& p);

// P(rho) - P(rtilde) - P'(rtilde) (rho - rtilde): the convexity gap of the
// pressure potential; strictly positive for rho != rtilde. rtilde must be
// positive, rho non-negative.
double relative_pressure_potential(double rho, double rtilde,
                                   const ScalingParams& p);

ScalarField pressure(const ScalarField& rho, const ScalingParams& p);

// Smooth cutoff in density separating the "essential" region around rho_bar
// from the "residual" far field:
//   chi = 1 on [rho_bar/2, 2 rho_bar],  chi = 0 outside (rho_bar/4, 4 rho_bar),
// built from the exp(-1/t) mollifier, values in [0,1], C^infinity.
class DensityCutoff {
 public:
  explicit DensityCutoff(double rho_bar);

  double operator()(double rho) const;
  double rho_bar() const { return rho_bar_; }
  double plateau_lo() const { return 0.5 * rho_bar_; }
  double plateau_hi() const { return 2.0 * rho_bar_; }
  double support_lo() const { return 0.25 * rho_bar_; }
  double support_hi() const { return 4.0 * rho_bar_; }

 private:
  double rho_bar_;
};

// Pointwise exact partition H = ess + res with ess = chi(rho) H,
// res = (1 - chi(rho)) H.
std::pair<ScalarField, ScalarField> ess_res_split(const ScalarField& h,
                                                  const ScalarField& rho,
                                                  const DensityCutoff& chi);

// 1/2 * min P'' over the cutoff support [rho_bar/4, 4 rho_bar]; P'' is
// monotone in rho, so the minimum sits at an endpoint. Gives the pointwise
// bound  relative_pressure_potential >= c_conv (rho - rtilde)^2  when both
// arguments stay in the support interval.
double convexity_constant(const ScalingParams& p);

// min over the residual set closure { rho <= rho_bar/2 } U { rho >= 2 rho_bar }
// (including the rho -> infinity limit a/(gamma-1)) and rtilde in
// [rtilde_min, rtilde_max] of relative_pressure_potential / (1 + rho^gamma),
// sampled numerically with a small safety deflation. Requires the rtilde range
// to stay inside the open plateau (rho_bar/2, 2 rho_bar).
double res_coercivity_constant(const ScalingParams& p, double rtilde_min,
                               double rtilde_max);

// sup over the residual set closure of rho / (1 + rho^gamma), numerically,
// slightly inflated; couples the residual kinetic component to the
// mass-pressure component in the coercivity bound.
double res_density_bound(const ScalingParams& p);

}  // namespace thermo
}  // namespace rossby
