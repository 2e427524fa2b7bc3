#include "rossby/operators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include "rossby/errors.hpp"
#include "rossby/fft.hpp"

namespace rossby::spectral {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Apply a per-mode multiplier m(kx, ky, kz) in spectral space.
ScalarField apply_multiplier(
    const ScalarField& f,
    const std::function<std::complex<double>(double, double, double)>& m,
    bool zero_nyquist_x, bool zero_nyquist_y, bool zero_nyquist_z) {
  const Grid& g = *f.grid;
  Spectrum s = forward(f);
  const int hx = g.nx() / 2 + 1;
  for (int iz = 0; iz < g.nz(); ++iz) {
    const bool nyq_z = zero_nyquist_z && g.nz() > 1 && iz == g.nz() / 2;
    for (int iy = 0; iy < g.ny(); ++iy) {
      const bool nyq_y = zero_nyquist_y && iy == g.ny() / 2;
      for (int ikx = 0; ikx < hx; ++ikx) {
        const std::size_t idx = s.index(ikx, iy, iz);
        if (nyq_z || nyq_y || (zero_nyquist_x && ikx == g.nx() / 2)) {
          s.c[idx] = 0.0;
          continue;
        }
        s.c[idx] *= m(g.kx(ikx), g.ky(iy), g.kz(iz));
      }
    }
  }
  return inverse(s);
}

ScalarField derivative(const ScalarField& f, int axis) {
  switch (axis) {
    case 0:
      return apply_multiplier(
          f, [](double kx, double, double) { return kI * kx; }, true, false,
          false);
    case 1:
      return apply_multiplier(
          f, [](double, double ky, double) { return kI * ky; }, false, true,
          false);
    default:
      return apply_multiplier(
          f, [](double, double, double kz) { return kI * kz; }, false, false,
          true);
  }
}

}  // namespace

ScalarField dealias(const ScalarField& f) {
  const Grid& g = *f.grid;
  Spectrum s = forward(f);
  const int hx = g.nx() / 2 + 1;
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ikx = 0; ikx < hx; ++ikx)
        if (!g.mode_retained(ikx, iy, iz)) s.c[s.index(ikx, iy, iz)] = 0.0;
  return inverse(s);
}

VectorField dealias(const VectorField& v) {
  VectorField out;
  for (int i = 0; i < 3; ++i) out[i] = dealias(v[i]);
  return out;
}

VectorField grad(const ScalarField& f) {
  VectorField out;
  out[0] = derivative(f, 0);
  out[1] = derivative(f, 1);
  if (f.grid->nz() > 1) {
    out[2] = derivative(f, 2);
  } else {
    out[2] = ScalarField(f.grid);
  }
  return out;
}

VectorField grad_h(const ScalarField& f) {
  VectorField out;
  out[0] = derivative(f, 0);
  out[1] = derivative(f, 1);
  out[2] = ScalarField(f.grid);
  return out;
}

VectorField perp_grad_h(const ScalarField& f) {
  VectorField out;
  ScalarField d2 = derivative(f, 1);
  for (double& x : d2.v) x = -x;
  out[0] = std::move(d2);
  out[1] = derivative(f, 0);
  out[2] = ScalarField(f.grid);
  return out;
}

ScalarField div(const VectorField& v) {
  ScalarField out = derivative(v[0], 0);
  const ScalarField d2 = derivative(v[1], 1);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += d2.v[i];
  if (v.grid()->nz() > 1) {
    const ScalarField d3 = derivative(v[2], 2);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += d3.v[i];
  }
  return out;
}

ScalarField div_h(const VectorField& v) {
  ScalarField out = derivative(v[0], 0);
  const ScalarField d2 = derivative(v[1], 1);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += d2.v[i];
  return out;
}

ScalarField curl_h(const VectorField& v) {
  ScalarField out = derivative(v[1], 0);
  const ScalarField d2 = derivative(v[0], 1);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= d2.v[i];
  return out;
}

ScalarField laplacian_h(const ScalarField& f) {
  return apply_multiplier(
      f,
      [](double kx, double ky, double) {
        return std::complex<double>(-(kx * kx + ky * ky), 0.0);
      },
      true, true, false);
}

ScalarField solve_helmholtz_h(const ScalarField& f, double alpha,
                              double* removed_mean) {
  if (alpha < 0.0)
    throw ConfigError("solve_helmholtz_h: alpha must be non-negative");
  const Grid& g = *f.grid;
  Spectrum s = forward(f);
  double removed = 0.0;
  const int hx = g.nx() / 2 + 1;
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iy = 0; iy < g.ny(); ++iy) {
      for (int ikx = 0; ikx < hx; ++ikx) {
        const std::size_t idx = s.index(ikx, iy, iz);
        const double kx = g.kx(ikx);
        const double ky = g.ky(iy);
        const double kh2 = kx * kx + ky * ky;
        if (kh2 == 0.0 && alpha == 0.0) {
          // Horizontal-mean part is outside the range of -Lap_h: project it
          // out and fix the solution's gauge to zero mean.
          if (ikx == 0 && iy == 0 && iz == 0) removed = s.c[idx].real();
          s.c[idx] = 0.0;
          continue;
        }
        s.c[idx] /= (kh2 + alpha);
      }
    }
  }
  if (removed_mean) *removed_mean = removed;
  return inverse(s);
}

ScalarField vertical_average(const ScalarField& f) {
  const Grid& g = *f.grid;
  if (g.nz() == 1) return f;
  GridPtr g2d = Grid::make(g.nx(), g.ny(), 1, g.lx(), g.ly());
  ScalarField out(g2d);
  const double w = 1.0 / g.nz();
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix)
        out(ix, iy, 0) += w * f(ix, iy, iz);
  return out;
}

ScalarField lift_vertical(const ScalarField& f2d, const GridPtr& g3d) {
  const Grid& g2 = *f2d.grid;
  if (g2.nz() != 1) throw ConfigError("lift_vertical: source must have nz = 1");
  if (g2.nx() != g3d->nx() || g2.ny() != g3d->ny() || g2.lx() != g3d->lx() ||
      g2.ly() != g3d->ly())
    throw ConfigError("lift_vertical: horizontal grids differ");
  ScalarField out(g3d);
  for (int iz = 0; iz < g3d->nz(); ++iz)
    for (int iy = 0; iy < g3d->ny(); ++iy)
      for (int ix = 0; ix < g3d->nx(); ++ix)
        out(ix, iy, iz) = f2d(ix, iy, 0);
  return out;
}

namespace {
ScalarField symmetrize(const ScalarField& f, double sign) {
  const Grid& g = *f.grid;
  ScalarField out(f.grid);
  for (int iz = 0; iz < g.nz(); ++iz) {
    const int jz = (g.nz() - iz) % g.nz();  // grid image of x3 -> -x3
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix)
        out(ix, iy, iz) = 0.5 * (f(ix, iy, iz) + sign * f(ix, iy, jz));
  }
  return out;
}
}  // namespace

ScalarField symmetrize_even(const ScalarField& f) { return symmetrize(f, 1.0); }
ScalarField symmetrize_odd(const ScalarField& f) { return symmetrize(f, -1.0); }

VectorField symmetrize_flow(const VectorField& v) {
  VectorField out;
  out[0] = symmetrize_even(v[0]);
  out[1] = symmetrize_even(v[1]);
  out[2] = symmetrize_odd(v[2]);
  return out;
}

double mean(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.v) s += x;
  return s / static_cast<double>(f.v.size());
}

double integral(const ScalarField& f) { return mean(f) * f.grid->volume(); }

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const VectorField& v) {
  double m = 0.0;
  const std::size_t n = v[0].v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = v[0].v[i] * v[0].v[i] + v[1].v[i] * v[1].v[i] +
                     v[2].v[i] * v[2].v[i];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

std::complex<double> mode_coefficient(const Spectrum& s, int kx, int ky,
                                      int kz) {
  const Grid& g = *s.grid;
  if (kx < 0 || kx > g.nx() / 2)
    throw ConfigError("mode_coefficient: kx outside half-spectrum");
  const int iy = ky >= 0 ? ky : ky + g.ny();
  const int iz = kz >= 0 ? kz : kz + g.nz();
  return s.c[s.index(kx, iy, iz)];
}

}  // namespace rossby::spectral
