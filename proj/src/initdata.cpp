#include "rossby/initdata.hpp"

#include <cmath>
#include <cstdint>

#include "rossby/errors.hpp"
#include "rossby/fft.hpp"
#include "rossby/operators.hpp"

namespace rossby::initdata {

namespace {

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

void require_stream(const ScalarField& q0, const char* where) {
  if (q0.grid->nz() != 1)
    throw ConfigError(std::string(where) +
                      ": stream function must live on an nz = 1 grid");
  const double scale = 1.0 + spectral::max_abs(q0);
  if (std::abs(spectral::mean(q0)) > 1e-12 * scale)
    throw ConfigError(std::string(where) +
                      ": stream function must have zero mean");
  if (max_abs_diff(q0, spectral::dealias(q0)) > 1e-12 * scale)
    throw ConfigError(std::string(where) +
                      ": stream function must be spectrally localized "
                      "(top-third modes zero)");
}

void require_symmetry_class(const ScalarField& r, const VectorField& u,
                            const char* where) {
  const double sr = 1.0 + spectral::max_abs(r);
  const double su = 1.0 + spectral::max_abs(u);
  const VectorField us = spectral::symmetrize_flow(u);
  if (max_abs_diff(r, spectral::symmetrize_even(r)) > 1e-12 * sr ||
      max_abs_diff(u[0], us[0]) > 1e-12 * su ||
      max_abs_diff(u[1], us[1]) > 1e-12 * su ||
      max_abs_diff(u[2], us[2]) > 1e-12 * su)
    throw ConfigError(
        std::string(where) +
        ": data must lie in the slab symmetry class (density and "
        "horizontal velocity even in x3, vertical velocity odd; for "
        "nz = 1 the vertical velocity must vanish)");
}

ScalarField build_density(const ScalarField& perturbation,
                          const ScalingParams& p, const char* where) {
  ScalarField rho = perturbation;
  double lo = 1e300;
  for (auto& x : rho.v) {
    x = p.rho_bar + p.epsilon * x;
    lo = std::min(lo, x);
  }
  if (!(lo > 0.0))
    throw ConfigError(std::string(where) +
                      ": density not positive (epsilon too large for the "
                      "given perturbation)");
  return rho;
}

}  // namespace

euler::FlowState make_well_prepared(const ScalarField& q0,
                                    const ScalingParams& p,
                                    const GridPtr& out_grid) {
  p.validate();
  require_stream(q0, "make_well_prepared");
  const double kappa = p.sound_speed_sq() / p.rho_bar;
  VectorField v0 = spectral::perp_grad_h(q0);
  for (int c = 0; c < 3; ++c)
    for (auto& x : v0[c].v) x *= kappa;

  const GridPtr g = out_grid ? out_grid : q0.grid;
  const bool lift = !same_grid(*g, *q0.grid);
  const ScalarField q = lift ? spectral::lift_vertical(q0, g) : q0;
  VectorField v(g);
  for (int c = 0; c < 3; ++c)
    v[c] = lift ? spectral::lift_vertical(v0[c], g) : v0[c];

  euler::FlowState s(g);
  s.rho = build_density(q, p, "make_well_prepared");
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < s.rho.v.size(); ++i)
      s.mom[c].v[i] = s.rho.v[i] * v[c].v[i];
  return s;
}

ScalarField regularize_delta(const ScalarField& f, double delta) {
  if (!(delta > 0.0))
    throw ConfigError("regularize_delta: delta must be positive");
  const Grid& g = *f.grid;
  Spectrum s = spectral::forward(f);
  const double cut_sq = (1.0 / delta) * (1.0 / delta) * (1.0 + 1e-12);
  const int hx = g.nx() / 2 + 1;
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double kyz_sq = g.ky(iy) * g.ky(iy) + g.kz(iz) * g.kz(iz);
      for (int ikx = 0; ikx < hx; ++ikx, ++idx) {
        if (g.kx(ikx) * g.kx(ikx) + kyz_sq > cut_sq) s.c[idx] = 0.0;
      }
    }
  }
  return spectral::inverse(s);
}

VectorField regularize_delta(const VectorField& v, double delta) {
  VectorField out(v.grid());
  for (int c = 0; c < 3; ++c) out[c] = regularize_delta(v[c], delta);
  return out;
}

double default_delta(const Grid& g) { return 2.0 / g.max_retained_k(); }

DataDecomposition decompose_ill_prepared(const ScalarField& rho1_0,
                                         const VectorField& u0, double delta,
                                         const ScalingParams& p) {
  p.validate();
  require_same_grid(rho1_0, u0[0], "decompose_ill_prepared");
  require_symmetry_class(rho1_0, u0, "decompose_ill_prepared");

  const ScalarField r_d = regularize_delta(rho1_0, delta);
  const VectorField u_d = regularize_delta(u0, delta);
  const ScalarField avg_r = spectral::vertical_average(r_d);
  const ScalarField avg_curl =
      spectral::vertical_average(spectral::curl_h(u_d));

  const double csq = p.sound_speed_sq();
  ScalarField rhs = avg_r;
  for (std::size_t i = 0; i < rhs.v.size(); ++i)
    rhs.v[i] = avg_r.v[i] / csq - p.rho_bar * avg_curl.v[i];

  DataDecomposition d;
  d.q0_delta = spectral::solve_helmholtz_h(rhs, 1.0 / csq);
  d.v0_delta = spectral::perp_grad_h(d.q0_delta);

  const GridPtr& g = rho1_0.grid;
  const bool lift = !same_grid(*g, *d.q0_delta.grid);
  const ScalarField ql =
      lift ? spectral::lift_vertical(d.q0_delta, g) : d.q0_delta;
  d.s0_delta = r_d;
  for (std::size_t i = 0; i < d.s0_delta.v.size(); ++i)
    d.s0_delta.v[i] -= ql.v[i];
  d.V0_delta = u_d;
  for (int c = 0; c < 2; ++c) {
    const ScalarField vl =
        lift ? spectral::lift_vertical(d.v0_delta[c], g) : d.v0_delta[c];
    for (std::size_t i = 0; i < d.V0_delta[c].v.size(); ++i)
      d.V0_delta[c].v[i] -= vl.v[i];
  }
  return d;
}

euler::FlowState make_ill_prepared(const ScalarField& rho1_0,
                                   const VectorField& u0,
                                   const ScalingParams& p) {
  p.validate();
  require_same_grid(rho1_0, u0[0], "make_ill_prepared");
  require_symmetry_class(rho1_0, u0, "make_ill_prepared");
  euler::FlowState s(rho1_0.grid);
  s.rho = build_density(rho1_0, p, "make_ill_prepared");
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < s.rho.v.size(); ++i)
      s.mom[c].v[i] = s.rho.v[i] * u0[c].v[i];
  return s;
}

// --- Data families ----------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [-1, 1), from the top 53 bits of the generator.
double symmetric_uniform(std::uint64_t& state) {
  return 2.0 * ((splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

void require_2d(const GridPtr& g, const char* where) {
  if (!g || g->nz() != 1)
    throw ConfigError(std::string(where) + ": generators produce nz = 1 data");
}

void require_amplitude(double a, const char* where) {
  if (!(a >= 0.0))
    throw ConfigError(std::string(where) + ": amplitude must be >= 0");
}

// Zero the mean, dealias, and scale the sup norm to `amplitude`.
ScalarField finalize(ScalarField f, double amplitude) {
  const double m = spectral::mean(f);
  for (auto& x : f.v) x -= m;
  f = spectral::dealias(f);
  const double s = spectral::max_abs(f);
  if (s > 0.0) {
    const double scale = amplitude / s;
    for (auto& x : f.v) x *= scale;
  }
  return f;
}

ScalarField periodized_gaussian(const GridPtr& g, double cx, double cy,
                                double sigma) {
  ScalarField f(g);
  const double lx = g->lx(), ly = g->ly();
  for (int iy = 0; iy < g->ny(); ++iy) {
    for (int ix = 0; ix < g->nx(); ++ix) {
      double acc = 0.0;
      for (int jy = -1; jy <= 1; ++jy) {
        for (int jx = -1; jx <= 1; ++jx) {
          const double dx = g->x(ix) - cx + jx * lx;
          const double dy = g->y(iy) - cy + jy * ly;
          acc += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
      }
      f(ix, iy, 0) = acc;
    }
  }
  return f;
}

}  // namespace

ScalarField stream_zero(const GridPtr& g) {
  require_2d(g, "stream_zero");
  return ScalarField(g);
}

ScalarField stream_single_mode(const GridPtr& g, double amplitude) {
  require_2d(g, "stream_single_mode");
  require_amplitude(amplitude, "stream_single_mode");
  ScalarField f(g);
  const double k = 2.0 * M_PI / g->lx();
  for (int iy = 0; iy < g->ny(); ++iy)
    for (int ix = 0; ix < g->nx(); ++ix)
      f(ix, iy, 0) = amplitude * std::cos(k * g->x(ix));
  return f;
}

ScalarField stream_two_mode(const GridPtr& g, double amplitude) {
  require_2d(g, "stream_two_mode");
  require_amplitude(amplitude, "stream_two_mode");
  ScalarField f(g);
  const double kx = 2.0 * M_PI / g->lx();
  const double ky = 4.0 * M_PI / g->ly();
  for (int iy = 0; iy < g->ny(); ++iy)
    for (int ix = 0; ix < g->nx(); ++ix)
      f(ix, iy, 0) =
          std::cos(kx * g->x(ix)) + 0.7 * std::sin(ky * g->y(iy));
  return finalize(std::move(f), amplitude);
}

ScalarField stream_gaussian_dipole(const GridPtr& g, double amplitude) {
  require_2d(g, "stream_gaussian_dipole");
  require_amplitude(amplitude, "stream_gaussian_dipole");
  const double sigma = 0.06 * std::min(g->lx(), g->ly());
  ScalarField f =
      periodized_gaussian(g, 0.40 * g->lx(), 0.35 * g->ly(), sigma);
  const ScalarField h =
      periodized_gaussian(g, 0.60 * g->lx(), 0.65 * g->ly(), sigma);
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] -= h.v[i];
  return finalize(std::move(f), amplitude);
}

ScalarField stream_random_band(const GridPtr& g, double amplitude,
                               std::uint64_t seed) {
  require_2d(g, "stream_random_band");
  require_amplitude(amplitude, "stream_random_band");
  const int band = std::min({3, g->dealias_keep(g->nx()),
                             g->dealias_keep(g->ny())});
  std::uint64_t state = seed;
  ScalarField f(g);
  const double bx = 2.0 * M_PI / g->lx();
  const double by = 2.0 * M_PI / g->ly();
  // One cosine/sine pair per independent mode (k1 > 0, or k1 = 0 and
  // k2 > 0), drawn in a fixed order so the field is seed-deterministic.
  for (int k1 = 0; k1 <= band; ++k1) {
    for (int k2 = -band; k2 <= band; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double a = symmetric_uniform(state);
      const double b = symmetric_uniform(state);
      for (int iy = 0; iy < g->ny(); ++iy) {
        for (int ix = 0; ix < g->nx(); ++ix) {
          const double phase = bx * k1 * g->x(ix) + by * k2 * g->y(iy);
          f(ix, iy, 0) += a * std::cos(phase) + b * std::sin(phase);
        }
      }
    }
  }
  return finalize(std::move(f), amplitude);
}

IllData ill_divergent_bump(const GridPtr& g, double amplitude) {
  require_2d(g, "ill_divergent_bump");
  require_amplitude(amplitude, "ill_divergent_bump");
  const double s1 = 0.08 * std::min(g->lx(), g->ly());
  const ScalarField phi = spectral::dealias(
      periodized_gaussian(g, 0.50 * g->lx(), 0.50 * g->ly(), s1));
  IllData d;
  d.u = spectral::grad_h(phi);
  const double s = spectral::max_abs(d.u);
  if (s > 0.0) {
    const double scale = amplitude / s;
    for (int c = 0; c < 3; ++c)
      for (auto& x : d.u[c].v) x *= scale;
  }
  const double s2 = 0.07 * std::min(g->lx(), g->ly());
  d.rho1 = finalize(
      periodized_gaussian(g, 0.30 * g->lx(), 0.70 * g->ly(), s2), amplitude);
  return d;
}

IllData ill_random_band(const GridPtr& g, double amplitude,
                        std::uint64_t seed) {
  require_2d(g, "ill_random_band");
  require_amplitude(amplitude, "ill_random_band");
  IllData d;
  d.rho1 = stream_random_band(g, amplitude, seed ^ 0x243F6A8885A308D3ULL);
  d.u = VectorField(g);
  d.u[0] = stream_random_band(g, amplitude, seed ^ 0x13198A2E03707344ULL);
  d.u[1] = stream_random_band(g, amplitude, seed ^ 0xA4093822299F31D0ULL);
  return d;
}

}  // namespace rossby::initdata
