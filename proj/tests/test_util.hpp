#pragma once

// Shared helpers for the unit tests: pointwise field constructors,
// deterministic pseudo-random band-limited fields, and difference metrics.

#include <cmath>
#include <cstdint>
#include <functional>

#include "rossby/grid.hpp"
#include "rossby/operators.hpp"

namespace testutil {

constexpr double kPi = 3.14159265358979323846;

inline rossby::ScalarField make_field(
    const rossby::GridPtr& g,
    const std::function<double(double, double, double)>& f) {
  rossby::ScalarField out(g);
  for (int iz = 0; iz < g->nz(); ++iz)
    for (int iy = 0; iy < g->ny(); ++iy)
      for (int ix = 0; ix < g->nx(); ++ix)
        out(ix, iy, iz) = f(g->x(ix), g->y(iy), g->z(iz));
  return out;
}

inline double max_diff(const rossby::ScalarField& a,
                       const rossby::ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

inline double max_diff(const rossby::VectorField& a,
                       const rossby::VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) m = std::max(m, max_diff(a[c], b[c]));
  return m;
}

// L2 norm (square root of the volume integral of the square).
inline double l2_norm(const rossby::ScalarField& f) {
  double acc = 0.0;
  for (double x : f.v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(f.v.size()) *
                   f.grid->volume());
}

// Deterministic 64-bit mixer (splitmix64) mapped to [-1, 1).
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() {  // [-1, 1)
    return static_cast<double>(next() >> 11) * (1.0 / 4503599627370496.0) -
           1.0;
  }
};

// Smooth deterministic pseudo-random field: a fixed-order trigonometric
// synthesis over integer modes |k1| <= band, |k2| <= band, |k3| <= bandz,
// normalized to the requested sup amplitude. Produces fully 3D data when the
// grid has nz > 1 and bandz > 0.
inline rossby::ScalarField random_smooth(const rossby::GridPtr& g, int band,
                                         int bandz, std::uint64_t seed,
                                         double amplitude) {
  Rng rng(seed);
  rossby::ScalarField f(g);
  const double fx = 2.0 * kPi / g->lx();
  const double fy = 2.0 * kPi / g->ly();
  const double fz = 2.0 * kPi / g->lz();
  for (int k1 = 0; k1 <= band; ++k1)
    for (int k2 = -band; k2 <= band; ++k2)
      for (int k3 = -bandz; k3 <= bandz; ++k3) {
        const double a = rng.uniform();
        const double ph = kPi * rng.uniform();
        if (k1 == 0 && k2 < 0) continue;            // conjugate pair
        if (k1 == 0 && k2 == 0 && k3 <= 0) continue;  // mean / conjugates
        for (int iz = 0; iz < g->nz(); ++iz)
          for (int iy = 0; iy < g->ny(); ++iy)
            for (int ix = 0; ix < g->nx(); ++ix)
              f(ix, iy, iz) += a * std::cos(fx * k1 * g->x(ix) +
                                            fy * k2 * g->y(iy) +
                                            fz * k3 * g->z(iz) + ph);
      }
  const double sup = rossby::spectral::max_abs(f);
  if (sup > 0.0)
    for (double& x : f.v) x *= amplitude / sup;
  return f;
}

}  // namespace testutil
