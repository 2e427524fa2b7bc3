#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rossby/errors.hpp"
#include "rossby/operators.hpp"
#include "rossby/target.hpp"
#include "test_util.hpp"

using namespace rossby;
using namespace testutil;
using target::TargetState;

namespace {
const double pi = kPi;

ScalingParams params_unit_c() {  // p'(rho_bar) = 1
  ScalingParams p;
  p.a = 0.5;
  p.gamma = 2.0;
  p.rho_bar = 1.0;
  return p;
}

// Periodized Gaussian (3x3 image sum), radially symmetric about the box
// center up to the spectral truncation.
ScalarField radial_bump(const GridPtr& g, double sigma, double amp) {
  ScalarField f(g);
  const double cx = 0.5 * g->lx(), cy = 0.5 * g->ly();
  for (int iy = 0; iy < g->ny(); ++iy)
    for (int ix = 0; ix < g->nx(); ++ix) {
      double s = 0.0;
      for (int px = -1; px <= 1; ++px)
        for (int py = -1; py <= 1; ++py) {
          const double dx = g->x(ix) - cx + px * g->lx();
          const double dy = g->y(iy) - cy + py * g->ly();
          s += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
      f(ix, iy, 0) = amp * s;
    }
  return spectral::dealias(f);
}
}  // namespace

TEST_CASE("target state requires a two-dimensional grid") {
  CHECK_THROWS_AS(TargetState(Grid::make(8, 8, 2, 1.0, 1.0)), ConfigError);
  CHECK_NOTHROW(TargetState(Grid::make(8, 8, 1, 1.0, 1.0)));
}

TEST_CASE("geostrophic velocity from the stream function") {
  auto g = Grid::make(64, 64, 1, 2.0 * pi, 2.0 * pi);
  ScalingParams p = params_unit_c();

  // q = sin(x2), p'(rho_bar) = rho_bar: v = (-cos(x2), 0).
  ScalarField q =
      make_field(g, [](double, double y, double) { return std::sin(y); });
  VectorField v = target::velocity_from_q(q, p);
  ScalarField e0 =
      make_field(g, [](double, double y, double) { return -std::cos(y); });
  CHECK(max_diff(v[0], e0) <= 1e-12);
  CHECK(spectral::max_abs(v[1]) <= 1e-12);
  CHECK(spectral::max_abs(v[2]) == 0.0);

  ScalarField zero(g);
  CHECK(spectral::max_abs(target::velocity_from_q(zero, p)) == 0.0);

  // Recovered velocity is divergence-free and in exact balance.
  ScalarField qr = random_smooth(g, 5, 0, 9, 0.8);
  VectorField vr = target::velocity_from_q(qr, p);
  CHECK(spectral::max_abs(spectral::div_h(vr)) <= 1e-12);
  CHECK(target::balance_residual(qr, vr, p) <= 1e-13);

  // Scaling with p'(rho_bar)/rho_bar.
  ScalingParams p2 = p;
  p2.a = 1.0;  // p' = 2
  VectorField v2 = target::velocity_from_q(q, p2);
  for (std::size_t i = 0; i < v2[0].v.size(); ++i)
    CHECK(std::abs(v2[0].v[i] - 2.0 * v[0].v[i]) <= 1e-12);
}

TEST_CASE("potential vorticity inversion") {
  auto g = Grid::make(64, 64, 1, 2.0 * pi, 2.0 * pi);
  ScalingParams p = params_unit_c();

  // omega = -(1 + 1/p') cos(x1)  =>  q = cos(x1).
  ScalarField omega = make_field(
      g, [](double x, double, double) { return -2.0 * std::cos(x); });
  ScalarField q = target::q_from_omega(omega, p);
  ScalarField expect =
      make_field(g, [](double x, double, double) { return std::cos(x); });
  CHECK(max_diff(q, expect) <= 1e-12);

  // Same with p' = 2: omega = -1.5 cos(x1) => q = cos(x1).
  ScalingParams p2 = p;
  p2.a = 1.0;
  ScalarField omega2(g);
  for (std::size_t i = 0; i < omega2.v.size(); ++i)
    omega2.v[i] = 0.75 * omega.v[i];
  CHECK(max_diff(target::q_from_omega(omega2, p2), expect) <= 1e-12);

  ScalarField zero(g);
  CHECK(spectral::max_abs(target::q_from_omega(zero, p)) == 0.0);

  // Round trip q -> omega -> q is the identity on dealiased fields.
  ScalarField qr = spectral::dealias(random_smooth(g, 6, 0, 13, 1.1));
  ScalarField back = target::q_from_omega(target::omega_from_q(qr, p), p);
  CHECK(max_diff(back, qr) <= 1e-12);

  // Consistency invariant: omega = laplacian_h q - q / p'.
  ScalarField w = target::omega_from_q(qr, p);
  ScalarField lap = spectral::laplacian_h(qr);
  for (std::size_t i = 0; i < w.v.size(); ++i)
    CHECK(std::abs(w.v[i] - (lap.v[i] - qr.v[i])) <= 1e-12);
}

TEST_CASE("single-mode and radial stream functions are steady") {
  ScalingParams p = params_unit_c();

  auto g = Grid::make(64, 64, 1, 2.0 * pi, 2.0 * pi);
  TargetState s(g);
  ScalarField q = make_field(g, [](double x, double y, double) {
    return 0.3 * std::cos(2.0 * x + y);
  });
  s.omega = target::omega_from_q(q, p);
  const ScalarField w0 = s.omega;

  // The tendency vanishes identically for a single Fourier mode; the bound
  // is spectral roundoff accumulated through two transform round-trips.
  TargetState rhs = target::target_rhs(s, p);
  CHECK(spectral::max_abs(rhs.omega) <= 1e-11);

  target::advance_to(s, 1.0, p, 0.4);
  CHECK(max_diff(s.omega, w0) <= 1e-10 * spectral::max_abs(w0));

  // Radially symmetric stream function: advection along level circles.
  TargetState r(g);
  ScalarField qr = radial_bump(g, 0.55, 0.3);
  r.omega = target::omega_from_q(qr, p);
  const ScalarField wr0 = r.omega;
  target::advance_to(r, 1.0, p, 0.4);
  CHECK(max_diff(r.omega, wr0) <= 1e-10 * spectral::max_abs(wr0));
}

TEST_CASE("target energy closed form and conservation") {
  ScalingParams p;
  p.a = 0.5;
  p.gamma = 2.0;
  p.rho_bar = 1.0;  // p' = 1

  auto g = Grid::make(64, 64, 1, 2.0 * pi, 2.0 * pi);
  ScalarField zero(g);
  CHECK(target::target_energy(zero, p) == 0.0);

  // q = cos(x1) on [0,2pi]^2 with p' = 1: integral sin^2 + cos^2 = 4 pi^2.
  ScalarField q =
      make_field(g, [](double x, double, double) { return std::cos(x); });
  CHECK(target::target_energy(q, p) ==
        doctest::Approx(4.0 * pi * pi).epsilon(1e-13));

  // Conservation along a genuinely nonlinear two-mode run.
  ScalarField q0 = make_field(g, [](double x, double y, double) {
    return 0.5 * std::cos(x) + 0.35 * std::sin(2.0 * y);
  });
  TargetState s(g);
  s.omega = target::omega_from_q(q0, p);
  const double e0 =
      target::target_energy(target::q_from_omega(s.omega, p), p);
  double max_drift = 0.0;
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    target::advance_to(s, t, p, 0.4);
    const double e =
        target::target_energy(target::q_from_omega(s.omega, p), p);
    max_drift = std::max(max_drift, std::abs(e - e0));
  }
  CHECK(max_drift <= 1e-6 * e0);

  // Potential vorticity extrema do not grow (transport structure).
  double w_min0 = 1e300, w_max0 = -1e300;
  TargetState s2(g);
  s2.omega = target::omega_from_q(q0, p);
  for (double w : s2.omega.v) {
    w_min0 = std::min(w_min0, w);
    w_max0 = std::max(w_max0, w);
  }
  target::advance_to(s2, 1.0, p, 0.4);
  double w_min = 1e300, w_max = -1e300;
  for (double w : s2.omega.v) {
    w_min = std::min(w_min, w);
    w_max = std::max(w_max, w);
  }
  const double scale = spectral::max_abs(s2.omega);
  CHECK(w_max <= w_max0 + 1e-6 * scale);
  CHECK(w_min >= w_min0 - 1e-6 * scale);
}

TEST_CASE("resolution self-convergence of the two-mode run") {
  ScalingParams p = params_unit_c();
  auto fine = Grid::make(64, 64, 1, 2.0 * pi, 2.0 * pi);
  auto coarse = Grid::make(32, 32, 1, 2.0 * pi, 2.0 * pi);

  auto run = [&](const GridPtr& g) {
    ScalarField q0 = make_field(g, [](double x, double y, double) {
      return 0.2 * std::cos(x) + 0.14 * std::sin(2.0 * y);
    });
    TargetState s(g);
    s.omega = target::omega_from_q(q0, p);
    target::advance_to(s, 1.0, p, 0.4, 0.01);
    return target::q_from_omega(s.omega, p);
  };

  ScalarField qf = run(fine);
  ScalarField qc = run(coarse);
  double diff = 0.0;
  for (int iy = 0; iy < 32; ++iy)
    for (int ix = 0; ix < 32; ++ix)
      diff = std::max(diff,
                      std::abs(qf(2 * ix, 2 * iy, 0) - qc(ix, iy, 0)));
  // Smooth data: the coarse run already resolves the solution to near
  // spectral accuracy; the gap must be far below the solution scale.
  CHECK(diff <= 1e-7);
}

TEST_CASE("blow-up from an oversized fixed step raises a stability error") {
  ScalingParams p = params_unit_c();
  auto g = Grid::make(32, 32, 1, 2.0 * pi, 2.0 * pi);
  TargetState s(g);
  ScalarField q0 = make_field(g, [](double x, double y, double) {
    return 0.8 * std::cos(x) + 0.5 * std::sin(2.0 * y) +
           0.3 * std::cos(3.0 * x + 2.0 * y);
  });
  s.omega = target::omega_from_q(q0, p);
  CHECK_THROWS_AS(target::advance_to(s, 40.0, p, 0.4, 2.5), NumericalError);
}
