#include "rossby/euler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rossby/errors.hpp"
#include "rossby/fft.hpp"
#include "rossby/operators.hpp"

namespace rossby::euler {

namespace {

using spectral::forward;
using spectral::inverse;

void require_positive_density(const FlowState& s, const char* where) {
  // Track finiteness separately: std::min skips NaN, so a poisoned field
  // could otherwise keep a positive minimum and slip past the guard.
  double rho_min = s.rho.v.empty() ? 0.0 : s.rho.v[0];
  bool finite = true;
  for (double r : s.rho.v) {
    finite = finite && std::isfinite(r);
    rho_min = std::min(rho_min, r);
  }
  if (!finite || !(rho_min > 0.0)) {
    std::ostringstream msg;
    msg << where << ": density positivity lost at t = " << s.t
        << " (min rho = " << rho_min << ")";
    throw NumericalError(msg.str());
  }
}

// Accumulate acc += i * k_axis * src over retained (dealiased) modes.
void add_derivative(Spectrum& acc, const Spectrum& src, int axis) {
  const Grid& g = *src.grid;
  const int hx = g.nx() / 2 + 1;
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iy = 0; iy < g.ny(); ++iy) {
      for (int ikx = 0; ikx < hx; ++ikx) {
        if (!g.mode_retained(ikx, iy, iz)) continue;
        const double k =
            axis == 0 ? g.kx(ikx) : (axis == 1 ? g.ky(iy) : g.kz(iz));
        const std::size_t idx = acc.index(ikx, iy, iz);
        acc.c[idx] += std::complex<double>(0.0, k) * src.c[idx];
      }
    }
  }
}

void mask_dealias(Spectrum& s) {
  const Grid& g = *s.grid;
  const int hx = g.nx() / 2 + 1;
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ikx = 0; ikx < hx; ++ikx)
        if (!g.mode_retained(ikx, iy, iz)) s.c[s.index(ikx, iy, iz)] = 0.0;
}

// acc += coeff * (-|k|^8) * src over retained modes.
void add_hyperviscosity(Spectrum& acc, const Spectrum& src, double nu) {
  const Grid& g = *src.grid;
  const int hx = g.nx() / 2 + 1;
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iy = 0; iy < g.ny(); ++iy) {
      for (int ikx = 0; ikx < hx; ++ikx) {
        if (!g.mode_retained(ikx, iy, iz)) continue;
        const double kx = g.kx(ikx), ky = g.ky(iy), kz = g.kz(iz);
        const double k2 = kx * kx + ky * ky + kz * kz;
        const double k8 = k2 * k2 * k2 * k2;
        const std::size_t idx = acc.index(ikx, iy, iz);
        acc.c[idx] -= nu * k8 * src.c[idx];
      }
    }
  }
}

ScalarField apply_hyperviscosity(const ScalarField& f, double nu) {
  Spectrum s = forward(f);
  Spectrum acc(f.grid);
  add_hyperviscosity(acc, s, nu);
  return inverse(acc);
}

double dot_integral(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s / static_cast<double>(a.v.size()) * a.grid->volume();
}

}  // namespace

VectorField velocity(const FlowState& s, const ScalingParams&) {
  require_positive_density(s, "velocity");
  VectorField u(s.grid());
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < u[c].v.size(); ++i)
      u[c].v[i] = s.mom[c].v[i] / s.rho.v[i];
  return u;
}

FlowState euler_rhs(const FlowState& s, const ScalingParams& p,
                    const EulerTerms& terms) {
  require_positive_density(s, "euler_rhs");
  const GridPtr& g = s.grid();
  FlowState rhs(g);
  rhs.t = s.t;

  // Vertical derivatives fall out naturally on nz = 1 grids (the only kz is
  // zero), so every branch below is written uniformly in the three axes.

  // Continuity: -div m, spectrally.
  Spectrum mom_spec[3] = {forward(s.mom[0]), forward(s.mom[1]),
                          forward(s.mom[2])};
  if (terms.mass_flux) {
    Spectrum divm(g);
    for (int j = 0; j < 3; ++j) add_derivative(divm, mom_spec[j], j);
    ScalarField d = inverse(divm);
    for (std::size_t i = 0; i < d.v.size(); ++i) rhs.rho.v[i] = -d.v[i];
  }

  // Convection: -d_j (m_i u_j); the flux tensor is symmetric (m_i u_j =
  // rho u_i u_j), so six pointwise products cover it.
  if (terms.convection) {
    VectorField u = velocity(s, p);
    auto product_spectrum = [&](int i, int j) {
      ScalarField f(g);
      for (std::size_t n = 0; n < f.v.size(); ++n)
        f.v[n] = s.mom[i].v[n] * u[j].v[n];
      Spectrum sp = forward(f);
      mask_dealias(sp);
      return sp;
    };
    Spectrum f00 = product_spectrum(0, 0);
    Spectrum f01 = product_spectrum(0, 1);
    Spectrum f11 = product_spectrum(1, 1);
    Spectrum f02 = product_spectrum(0, 2);
    Spectrum f12 = product_spectrum(1, 2);
    Spectrum f22 = product_spectrum(2, 2);

    const Spectrum* flux[3][3] = {{&f00, &f01, &f02},
                                  {&f01, &f11, &f12},
                                  {&f02, &f12, &f22}};
    for (int i = 0; i < 3; ++i) {
      Spectrum acc(g);
      for (int j = 0; j < 3; ++j) add_derivative(acc, *flux[i][j], j);
      ScalarField conv = inverse(acc);
      for (std::size_t n = 0; n < conv.v.size(); ++n)
        rhs.mom[i].v[n] -= conv.v[n];
    }
  }

  // Pressure gradient: -(1/eps^2) grad p(rho), dealiased in spectral space
  // (p is not a polynomial of bounded degree for general gamma).
  if (terms.pressure) {
    Spectrum ps = forward(thermo::pressure(s.rho, p));
    mask_dealias(ps);
    const double c = 1.0 / (p.epsilon * p.epsilon);
    for (int i = 0; i < 3; ++i) {
      Spectrum acc(g);
      add_derivative(acc, ps, i);
      ScalarField gp = inverse(acc);
      for (std::size_t n = 0; n < gp.v.size(); ++n)
        rhs.mom[i].v[n] -= c * gp.v[n];
    }
  }

  // Rotation: -(1/eps) b x m = -(1/eps) (-m2, m1, 0), pointwise.
  if (terms.rotation) {
    const double c = 1.0 / p.epsilon;
    for (std::size_t n = 0; n < rhs.mom[0].v.size(); ++n) {
      rhs.mom[0].v[n] += c * s.mom[1].v[n];
      rhs.mom[1].v[n] -= c * s.mom[0].v[n];
    }
  }

  // Optional spectral stabilization -nu (-Lap)^4 on both equations.
  if (terms.hyper_nu > 0.0) {
    Spectrum rs = forward(s.rho);
    Spectrum acc_rho(g);
    add_hyperviscosity(acc_rho, rs, terms.hyper_nu);
    ScalarField hr = inverse(acc_rho);
    for (std::size_t n = 0; n < hr.v.size(); ++n) rhs.rho.v[n] += hr.v[n];
    for (int i = 0; i < 3; ++i) {
      Spectrum acc(g);
      add_hyperviscosity(acc, mom_spec[i], terms.hyper_nu);
      ScalarField hm = inverse(acc);
      for (std::size_t n = 0; n < hm.v.size(); ++n) rhs.mom[i].v[n] += hm.v[n];
    }
  }

  return rhs;
}

double stable_dt(const FlowState& s, const ScalingParams& p, double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0)
    throw ConfigError("stable_dt: cfl must lie in (0, 1]");
  require_positive_density(s, "stable_dt");
  double umax = 0.0;
  double cmax = 0.0;
  for (std::size_t i = 0; i < s.rho.v.size(); ++i) {
    const double rho = s.rho.v[i];
    const double ux = s.mom[0].v[i] / rho;
    const double uy = s.mom[1].v[i] / rho;
    const double uz = s.mom[2].v[i] / rho;
    umax = std::max(umax, std::sqrt(ux * ux + uy * uy + uz * uz));
    cmax = std::max(cmax, thermo::pressure_derivative(rho, p));
  }
  cmax = std::sqrt(cmax);
  const double h = s.grid()->min_spacing();
  return cfl * h / (umax + cmax / p.epsilon + h / p.epsilon);
}

namespace {
FlowState axpy(const FlowState& y, double alpha, const FlowState& k) {
  FlowState out(y.grid());
  out.t = y.t + alpha;
  for (std::size_t i = 0; i < y.rho.v.size(); ++i)
    out.rho.v[i] = y.rho.v[i] + alpha * k.rho.v[i];
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < y.mom[c].v.size(); ++i)
      out.mom[c].v[i] = y.mom[c].v[i] + alpha * k.mom[c].v[i];
  return out;
}
}  // namespace

FlowState step_rk4(const FlowState& s, double dt, const ScalingParams& p,
                   const EulerTerms& terms, bool symmetrize) {
  const FlowState k1 = euler_rhs(s, p, terms);
  const FlowState k2 = euler_rhs(axpy(s, 0.5 * dt, k1), p, terms);
  const FlowState k3 = euler_rhs(axpy(s, 0.5 * dt, k2), p, terms);
  const FlowState k4 = euler_rhs(axpy(s, dt, k3), p, terms);

  FlowState out(s.grid());
  out.t = s.t + dt;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < s.rho.v.size(); ++i)
    out.rho.v[i] = s.rho.v[i] + w * (k1.rho.v[i] + 2.0 * k2.rho.v[i] +
                                     2.0 * k3.rho.v[i] + k4.rho.v[i]);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < s.mom[c].v.size(); ++i)
      out.mom[c].v[i] =
          s.mom[c].v[i] + w * (k1.mom[c].v[i] + 2.0 * k2.mom[c].v[i] +
                               2.0 * k3.mom[c].v[i] + k4.mom[c].v[i]);

  out.rho = spectral::dealias(out.rho);
  out.mom = spectral::dealias(out.mom);
  if (symmetrize && s.grid()->nz() > 1) {
    out.rho = spectral::symmetrize_even(out.rho);
    out.mom = spectral::symmetrize_flow(out.mom);
  }
  require_positive_density(out, "step_rk4");
  return out;
}

void advance_to(FlowState& s, double t_target, const ScalingParams& p,
                const IntegrateOptions& opt) {
  const double tol = 1e-12 * std::max(1.0, std::abs(t_target));
  // The hyperviscous term adds a real stiffness nu*k^8 that the hyperbolic
  // CFL estimate knows nothing about; cap the step so the stiffest retained
  // mode stays inside the explicit four-stage stability interval (radius
  // ~2.79 on the negative real axis, taken with margin).
  double dt_hyper = 1e300;
  if (opt.terms.hyper_nu > 0.0) {
    const double kmax = s.grid()->max_retained_k();
    const double rate = opt.terms.hyper_nu * std::pow(kmax, 8.0);
    if (rate > 0.0) dt_hyper = opt.cfl * 2.5 / rate;
  }
  while (t_target - s.t > tol) {
    const double dt_cfl =
        opt.fixed_dt > 0.0 ? opt.fixed_dt
                           : std::min(stable_dt(s, p, opt.cfl), dt_hyper);
    const double dt = std::min(dt_cfl, t_target - s.t);
    s = step_rk4(s, dt, p, opt.terms, opt.symmetrize);
  }
  s.t = t_target;
}

double total_mass(const FlowState& s) { return spectral::integral(s.rho); }

double total_energy(const FlowState& s, const ScalingParams& p) {
  require_positive_density(s, "total_energy");
  const double inv_eps2 = 1.0 / (p.epsilon * p.epsilon);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rho.v.size(); ++i) {
    const double rho = s.rho.v[i];
    const double m2 = s.mom[0].v[i] * s.mom[0].v[i] +
                      s.mom[1].v[i] * s.mom[1].v[i] +
                      s.mom[2].v[i] * s.mom[2].v[i];
    acc += 0.5 * m2 / rho +
           inv_eps2 * thermo::relative_pressure_potential(rho, p.rho_bar, p);
  }
  return acc / static_cast<double>(s.rho.v.size()) * s.grid()->volume();
}

double kinetic_energy(const FlowState& s, const ScalingParams& p) {
  require_positive_density(s, "kinetic_energy");
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rho.v.size(); ++i) {
    const double m2 = s.mom[0].v[i] * s.mom[0].v[i] +
                      s.mom[1].v[i] * s.mom[1].v[i] +
                      s.mom[2].v[i] * s.mom[2].v[i];
    acc += 0.5 * m2 / s.rho.v[i];
  }
  return acc / static_cast<double>(s.rho.v.size()) * s.grid()->volume();
}

double hyperviscous_power(const FlowState& s, const ScalingParams& p,
                          double hyper_nu) {
  if (hyper_nu <= 0.0) return 0.0;
  const VectorField u = velocity(s, p);
  const ScalarField h_rho = apply_hyperviscosity(s.rho, hyper_nu);
  const double inv_eps2 = 1.0 / (p.epsilon * p.epsilon);
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    const ScalarField h_m = apply_hyperviscosity(s.mom[c], hyper_nu);
    for (std::size_t i = 0; i < h_m.v.size(); ++i)
      acc += u[c].v[i] * h_m.v[i];
  }
  for (std::size_t i = 0; i < h_rho.v.size(); ++i) {
    const double u2 = u[0].v[i] * u[0].v[i] + u[1].v[i] * u[1].v[i] +
                      u[2].v[i] * u[2].v[i];
    const double dE_drho =
        -0.5 * u2 +
        inv_eps2 * (thermo::pressure_potential_derivative(s.rho.v[i], p) -
                    thermo::pressure_potential_derivative(p.rho_bar, p));
    acc += dE_drho * h_rho.v[i];
  }
  // acc is the signed dE/dt contribution (non-positive near equilibrium);
  // report the drain with the opposite sign so that E(0) - E(t) is close to
  // the time integral of this series.
  return -acc / static_cast<double>(s.rho.v.size()) * s.grid()->volume();
}

// --- Weak-form monitor -----------------------------------------------------

namespace {
// Smooth periodic bump centered at (cx, cy), unit peak.
ScalarField periodic_bump(const GridPtr& g, double cx, double cy,
                          double kappa) {
  ScalarField f(g);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int iz = 0; iz < g->nz(); ++iz)
    for (int iy = 0; iy < g->ny(); ++iy)
      for (int ix = 0; ix < g->nx(); ++ix) {
        const double px = std::cos(two_pi * (g->x(ix) - cx) / g->lx()) - 1.0;
        const double py = std::cos(two_pi * (g->y(iy) - cy) / g->ly()) - 1.0;
        f(ix, iy, iz) = std::exp(kappa * (px + py));
      }
  return f;
}
}  // namespace

WeakFormMonitor::WeakFormMonitor(const GridPtr& grid, const ScalingParams& p,
                                 double horizon)
    : params_(p), horizon_(horizon) {
  if (!(horizon > 0.0)) throw ConfigError("WeakFormMonitor: horizon <= 0");
  const double kappa = 3.0;
  g_c_ = periodic_bump(grid, 0.31 * grid->lx(), 0.42 * grid->ly(), kappa);
  grad_gc_ = spectral::grad(g_c_);
  g_m_ = VectorField(grid);
  g_m_[0] = periodic_bump(grid, 0.62 * grid->lx(), 0.52 * grid->ly(), kappa);
  g_m_[1] = periodic_bump(grid, 0.45 * grid->lx(), 0.71 * grid->ly(), kappa);
  grad_g1_ = spectral::grad(g_m_[0]);
  grad_g2_ = spectral::grad(g_m_[1]);
  div_gm_ = ScalarField(grid);
  for (std::size_t i = 0; i < div_gm_.v.size(); ++i)
    div_gm_.v[i] = grad_g1_[0].v[i] + grad_g2_[1].v[i];
}

double WeakFormMonitor::window(double t) const {
  if (t >= horizon_) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * t / horizon_));
}

double WeakFormMonitor::window_dt(double t) const {
  if (t >= horizon_) return 0.0;
  return -0.5 * std::numbers::pi / horizon_ *
         std::sin(std::numbers::pi * t / horizon_);
}

double WeakFormMonitor::boundary_continuity(const FlowState& s) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < g_c_.v.size(); ++i)
    acc += (s.rho.v[i] - params_.rho_bar) * g_c_.v[i];
  return window(s.t) * acc / static_cast<double>(g_c_.v.size()) *
         g_c_.grid->volume();
}

double WeakFormMonitor::boundary_momentum(const FlowState& s) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < g_c_.v.size(); ++i)
    acc += s.mom[0].v[i] * g_m_[0].v[i] + s.mom[1].v[i] * g_m_[1].v[i];
  return window(s.t) * acc / static_cast<double>(g_c_.v.size()) *
         g_c_.grid->volume();
}

double WeakFormMonitor::integrand_continuity(const FlowState& s) const {
  const double psi = window(s.t), dpsi = window_dt(s.t);
  double acc = 0.0;
  for (std::size_t i = 0; i < g_c_.v.size(); ++i) {
    acc += dpsi * (s.rho.v[i] - params_.rho_bar) * g_c_.v[i] +
           psi * (s.mom[0].v[i] * grad_gc_[0].v[i] +
                  s.mom[1].v[i] * grad_gc_[1].v[i] +
                  s.mom[2].v[i] * grad_gc_[2].v[i]);
  }
  return acc / static_cast<double>(g_c_.v.size()) * g_c_.grid->volume();
}

double WeakFormMonitor::integrand_momentum(const FlowState& s) const {
  const double psi = window(s.t), dpsi = window_dt(s.t);
  const double inv_eps2 = 1.0 / (params_.epsilon * params_.epsilon);
  const double inv_eps = 1.0 / params_.epsilon;
  const double p_ref = thermo::pressure(params_.rho_bar, params_);
  double acc = 0.0;
  for (std::size_t i = 0; i < g_c_.v.size(); ++i) {
    const double rho = s.rho.v[i];
    const double m1 = s.mom[0].v[i], m2 = s.mom[1].v[i], m3 = s.mom[2].v[i];
    const double u1 = m1 / rho, u2 = m2 / rho, u3 = m3 / rho;
    // m . dt(phi)
    acc += dpsi * (m1 * g_m_[0].v[i] + m2 * g_m_[1].v[i]);
    // (m (x) m / rho) : grad(phi) = sum_i m_i (u . grad g_i)
    acc += psi * (m1 * (u1 * grad_g1_[0].v[i] + u2 * grad_g1_[1].v[i] +
                        u3 * grad_g1_[2].v[i]) +
                  m2 * (u1 * grad_g2_[0].v[i] + u2 * grad_g2_[1].v[i] +
                        u3 * grad_g2_[2].v[i]));
    // (1/eps^2) (p - p(rho_bar)) div(phi)
    acc += psi * inv_eps2 * (thermo::pressure(rho, params_) - p_ref) *
           div_gm_.v[i];
    // -(1/eps) (b x m) . phi
    acc -= psi * inv_eps * (-m2 * g_m_[0].v[i] + m1 * g_m_[1].v[i]);
  }
  return acc / static_cast<double>(g_c_.v.size()) * g_c_.grid->volume();
}

void WeakFormMonitor::sample(const FlowState& s) {
  const double ic = integrand_continuity(s);
  const double im = integrand_momentum(s);
  if (!have_prev_) {
    have_prev_ = true;
    init_b_c_ = boundary_continuity(s);
    init_b_m_ = boundary_momentum(s);
  } else {
    const double h = s.t - prev_t_;
    acc_c_ += 0.5 * h * (prev_int_c_ + ic);
    acc_m_ += 0.5 * h * (prev_int_m_ + im);
  }
  prev_t_ = s.t;
  prev_int_c_ = ic;
  prev_int_m_ = im;
  res_cont_ = std::abs(boundary_continuity(s) - init_b_c_ - acc_c_);
  res_mom_ = std::abs(boundary_momentum(s) - init_b_m_ - acc_m_);
}

}  // namespace rossby::euler
