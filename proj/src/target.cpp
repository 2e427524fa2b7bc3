#include "rossby/target.hpp"

#include <algorithm>
#include <cmath>

#include "rossby/errors.hpp"
#include "rossby/operators.hpp"

namespace rossby::target {

TargetState::TargetState(const GridPtr& g2d) : omega(g2d) {
  if (g2d->nz() != 1)
    throw ConfigError("TargetState: the limit dynamics is two-dimensional "
                      "(nz must be 1)");
}

ScalarField q_from_omega(const ScalarField& omega, const ScalingParams& p) {
  ScalarField neg(omega.grid);
  for (std::size_t i = 0; i < neg.v.size(); ++i) neg.v[i] = -omega.v[i];
  return spectral::solve_helmholtz_h(neg, 1.0 / p.sound_speed_sq());
}

ScalarField omega_from_q(const ScalarField& q, const ScalingParams& p) {
  ScalarField out = spectral::laplacian_h(q);
  const double inv_c2 = 1.0 / p.sound_speed_sq();
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= inv_c2 * q.v[i];
  return out;
}

VectorField velocity_from_q(const ScalarField& q, const ScalingParams& p) {
  VectorField v = spectral::perp_grad_h(q);
  const double c = p.sound_speed_sq() / p.rho_bar;
  for (int i = 0; i < 2; ++i)
    for (double& x : v[i].v) x *= c;
  return v;
}

double balance_residual(const ScalarField& q, const VectorField& v,
                        const ScalingParams& p) {
  const VectorField gq = spectral::grad_h(q);
  const double c = p.sound_speed_sq() / p.rho_bar;
  double m = 0.0;
  for (std::size_t i = 0; i < q.v.size(); ++i) {
    const double r1 = c * gq[0].v[i] - v[1].v[i];  // + (b x v)_1 = -v2
    const double r2 = c * gq[1].v[i] + v[0].v[i];
    m = std::max(m, std::sqrt(r1 * r1 + r2 * r2));
  }
  return m;
}

TargetState target_rhs(const TargetState& s, const ScalingParams& p) {
  const ScalarField q = q_from_omega(s.omega, p);
  const VectorField u = spectral::perp_grad_h(q);  // advecting velocity
  const VectorField gw = spectral::grad_h(s.omega);
  ScalarField adv(s.grid());
  for (std::size_t i = 0; i < adv.v.size(); ++i)
    adv.v[i] = u[0].v[i] * gw[0].v[i] + u[1].v[i] * gw[1].v[i];
  adv = spectral::dealias(adv);
  TargetState rhs(s.grid());
  rhs.t = s.t;
  for (std::size_t i = 0; i < adv.v.size(); ++i) rhs.omega.v[i] = -adv.v[i];
  return rhs;
}

double stable_dt(const TargetState& s, const ScalingParams& p, double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0)
    throw ConfigError("target stable_dt: cfl must lie in (0, 1]");
  const ScalarField q = q_from_omega(s.omega, p);
  const double umax = spectral::max_abs(spectral::perp_grad_h(q));
  const double h = s.grid()->min_spacing();
  if (umax < 1e-300) return 1e30;
  return cfl * h / umax;
}

TargetState step_rk4(const TargetState& s, double dt, const ScalingParams& p) {
  auto axpy = [](const TargetState& y, double alpha, const TargetState& k) {
    TargetState out(y.grid());
    out.t = y.t + alpha;
    for (std::size_t i = 0; i < y.omega.v.size(); ++i)
      out.omega.v[i] = y.omega.v[i] + alpha * k.omega.v[i];
    return out;
  };
  const TargetState k1 = target_rhs(s, p);
  const TargetState k2 = target_rhs(axpy(s, 0.5 * dt, k1), p);
  const TargetState k3 = target_rhs(axpy(s, 0.5 * dt, k2), p);
  const TargetState k4 = target_rhs(axpy(s, dt, k3), p);
  TargetState out(s.grid());
  out.t = s.t + dt;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < s.omega.v.size(); ++i)
    out.omega.v[i] = s.omega.v[i] + w * (k1.omega.v[i] + 2.0 * k2.omega.v[i] +
                                         2.0 * k3.omega.v[i] + k4.omega.v[i]);
  out.omega = spectral::dealias(out.omega);
  return out;
}

void advance_to(TargetState& s, double t_target, const ScalingParams& p,
                double cfl, double fixed_dt) {
  const double tol = 1e-12 * std::max(1.0, std::abs(t_target));
  while (t_target - s.t > tol) {
    const double dt_cfl = fixed_dt > 0.0 ? fixed_dt : stable_dt(s, p, cfl);
    const double dt = std::min(dt_cfl, t_target - s.t);
    s = step_rk4(s, dt, p);
    // Check every sample: max/min folds skip NaN, so a sup-norm test alone
    // would report a poisoned field as zero and never fire.
    for (double w : s.omega.v)
      if (!std::isfinite(w))
        throw NumericalError(
            "target advance: potential vorticity lost finiteness (time step "
            "too large for the advective CFL)");
  }
  s.t = t_target;
}

double target_energy(const ScalarField& q, const ScalingParams& p) {
  const VectorField gq = spectral::grad_h(q);
  const double inv_c2 = 1.0 / p.sound_speed_sq();
  double acc = 0.0;
  for (std::size_t i = 0; i < q.v.size(); ++i)
    acc += gq[0].v[i] * gq[0].v[i] + gq[1].v[i] * gq[1].v[i] +
           inv_c2 * q.v[i] * q.v[i];
  return acc / static_cast<double>(q.v.size()) * q.grid->volume();
}

}  // namespace rossby::target
