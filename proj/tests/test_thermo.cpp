#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rossby/errors.hpp"
#include "rossby/thermo.hpp"
#include "test_util.hpp"

using namespace rossby;
using thermo::DensityCutoff;

namespace {

// Adaptive Simpson quadrature, an independent oracle for the pressure
// potential integral.
template <class F>
double simpson(const F& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

template <class F>
double adaptive(const F& f, double a, double b, double whole, double tol,
                int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(f, a, m);
  const double right = simpson(f, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) < 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, m, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(const F& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, tol);
  return adaptive(f, a, b, simpson(f, a, b), tol, 48);
}

double potential_by_quadrature(double rho, const ScalingParams& p) {
  auto f = [&](double z) { return thermo::pressure(z, p) / (z * z); };
  return rho * integrate(f, p.rho_bar, rho, 1e-14);
}

}  // namespace

TEST_CASE("pressure law closed form") {
  ScalingParams p;
  p.a = 1.0;
  p.gamma = 2.0;
  p.rho_bar = 1.0;
  CHECK(thermo::pressure(0.0, p) == 0.0);
  CHECK(thermo::pressure(1.0, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(thermo::pressure(2.0, p) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(thermo::pressure_derivative(2.0, p) ==
        doctest::Approx(4.0).epsilon(1e-14));
  CHECK(p.sound_speed_sq() == doctest::Approx(2.0).epsilon(1e-14));

  ScalingParams q;
  q.a = 0.5;
  q.gamma = 2.0;
  q.rho_bar = 1.0;
  CHECK(q.sound_speed_sq() == doctest::Approx(1.0).epsilon(1e-14));

  // Field version applies the law pointwise.
  auto g = Grid::make(4, 4, 1, 1.0, 1.0);
  ScalarField rho(g);
  for (std::size_t i = 0; i < rho.v.size(); ++i)
    rho.v[i] = 0.5 + 0.1 * static_cast<double>(i % 7);
  ScalarField pr = thermo::pressure(rho, p);
  for (std::size_t i = 0; i < rho.v.size(); ++i)
    CHECK(pr.v[i] == doctest::Approx(thermo::pressure(rho.v[i], p))
                         .epsilon(1e-15));
}

TEST_CASE("parameter validation") {
  ScalingParams p;
  p.validate();
  ScalingParams bad = p;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.epsilon = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.a = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.rho_bar = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("pressure potential closed form equals its defining quadrature") {
  std::vector<ScalingParams> sets(3);
  sets[0].a = 1.0;
  sets[0].gamma = 2.0;
  sets[0].rho_bar = 1.0;
  sets[1].a = 0.5;
  sets[1].gamma = 2.0;
  sets[1].rho_bar = 1.0;
  sets[2].a = 0.7;
  sets[2].gamma = 1.4;
  sets[2].rho_bar = 1.3;

  // Hand value: a = 1, gamma = 2, rho_bar = 1 gives P(rho) = rho^2 - rho.
  CHECK(thermo::pressure_potential(2.0, sets[0]) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(thermo::pressure_potential(1.0, sets[0]) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(thermo::pressure_potential(0.0, sets[0]) == 0.0);

  for (const auto& p : sets) {
    CHECK(thermo::pressure_potential(p.rho_bar, p) ==
          doctest::Approx(0.0).epsilon(1e-13));
    for (double rho : {0.05, 0.3, 0.9, 1.0, 1.7, 2.0, 3.5, 8.0}) {
      const double closed = thermo::pressure_potential(rho, p);
      const double quad = potential_by_quadrature(rho, p);
      CHECK(std::abs(closed - quad) <= 1e-10 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST_CASE("potential identities on a thousand log-spaced densities") {
  std::vector<ScalingParams> sets(2);
  sets[0].a = 1.0;
  sets[0].gamma = 2.0;
  sets[0].rho_bar = 1.0;
  sets[1].a = 0.5;
  sets[1].gamma = 1.4;
  sets[1].rho_bar = 2.0;
  for (const auto& p : sets) {
    const double lo = std::log(p.rho_bar / 100.0);
    const double hi = std::log(p.rho_bar * 100.0);
    for (int i = 0; i < 1000; ++i) {
      const double rho = std::exp(lo + (hi - lo) * i / 999.0);
      const double lhs1 = rho * thermo::pressure_potential_derivative(rho, p) -
                          thermo::pressure_potential(rho, p);
      const double rhs1 = thermo::pressure(rho, p);
      CHECK(std::abs(lhs1 - rhs1) <= 1e-12 * std::max(1.0, std::abs(rhs1)));
      const double lhs2 = rho * thermo::pressure_potential_second(rho, p);
      const double rhs2 = thermo::pressure_derivative(rho, p);
      CHECK(std::abs(lhs2 - rhs2) <= 1e-12 * std::max(1.0, std::abs(rhs2)));
    }
  }
}

TEST_CASE("relative pressure potential: values, positivity, derivative") {
  ScalingParams p;
  p.a = 1.0;
  p.gamma = 2.0;
  p.rho_bar = 1.0;
  // P(rho) = rho^2 - rho, P'(1) = 1: RP(2, 1) = 2 - 0 - 1 = 1.
  CHECK(thermo::relative_pressure_potential(2.0, 1.0, p) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(thermo::relative_pressure_potential(1.3, 1.3, p) == 0.0);
  CHECK_THROWS_AS(thermo::relative_pressure_potential(1.0, -0.5, p),
                  NumericalError);

  ScalingParams q;
  q.a = 0.6;
  q.gamma = 1.7;
  q.rho_bar = 1.2;
  for (double rt : {0.4, 0.9, 1.2, 2.5}) {
    // The derivative used inside RP matches a central difference of the
    // closed-form potential (independent check of P').
    const double h = 1e-6 * (1.0 + rt);
    const double fd = (thermo::pressure_potential(rt + h, q) -
                       thermo::pressure_potential(rt - h, q)) /
                      (2.0 * h);
    CHECK(std::abs(fd - thermo::pressure_potential_derivative(rt, q)) <=
          1e-7 * (1.0 + std::abs(fd)));
    for (double rho : {0.0, 0.1, 0.7, 1.9, 6.0}) {
      const double rp = thermo::relative_pressure_potential(rho, rt, q);
      if (rho == rt)
        CHECK(rp == 0.0);
      else
        CHECK(rp > 0.0);  // strict convexity of P
    }
  }
}

TEST_CASE("density cutoff plateau and support") {
  for (double rb : {1.0, 2.5}) {
    DensityCutoff chi(rb);
    CHECK(chi.plateau_lo() == 0.5 * rb);
    CHECK(chi.plateau_hi() == 2.0 * rb);
    CHECK(chi.support_lo() == 0.25 * rb);
    CHECK(chi.support_hi() == 4.0 * rb);
    CHECK(chi(rb) == 1.0);
    CHECK(chi(0.5 * rb) == 1.0);
    CHECK(chi(2.0 * rb) == 1.0);
    CHECK(chi(0.25 * rb) == 0.0);
    CHECK(chi(4.0 * rb) == 0.0);
    CHECK(chi(0.1 * rb) == 0.0);
    CHECK(chi(10.0 * rb) == 0.0);
    CHECK(chi(0.0) == 0.0);
    // Values in [0, 1]; monotone on each transition edge.
    double prev = 0.0;
    for (int i = 0; i <= 50; ++i) {
      const double rho = 0.25 * rb + (0.25 * rb) * i / 50.0;
      const double c = chi(rho);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      CHECK(c >= prev - 1e-15);
      prev = c;
    }
    prev = 1.0;
    for (int i = 0; i <= 50; ++i) {
      const double rho = 2.0 * rb + (2.0 * rb) * i / 50.0;
      const double c = chi(rho);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      CHECK(c <= prev + 1e-15);
      prev = c;
    }
  }
}

TEST_CASE("ess/res split partitions exactly") {
  auto g = Grid::make(8, 4, 1, 1.0, 1.0);
  DensityCutoff chi(1.0);
  ScalarField rho(g), h(g);
  testutil::Rng rng(7);
  for (std::size_t i = 0; i < rho.v.size(); ++i) {
    rho.v[i] = 0.1 + 2.5 * (0.5 * (rng.uniform() + 1.0));  // spans all regimes
    h.v[i] = 3.0 * rng.uniform();
  }
  auto [ess, res] = thermo::ess_res_split(h, rho, chi);
  for (std::size_t i = 0; i < h.v.size(); ++i) {
    CHECK(std::abs(ess.v[i] + res.v[i] - h.v[i]) <=
          1e-15 * (1.0 + std::abs(h.v[i])));
    CHECK(ess.v[i] == chi(rho.v[i]) * h.v[i]);
  }
  // Density inside the plateau everywhere: ess is all of h.
  for (double& r : rho.v) r = 1.0;
  auto [e2, r2] = thermo::ess_res_split(h, rho, chi);
  CHECK(testutil::max_diff(e2, h) == 0.0);
  for (double x : r2.v) CHECK(x == 0.0);
}

TEST_CASE("convexity constant bounds the potential gap on the support") {
  std::vector<ScalingParams> sets(3);
  sets[0].a = 1.0;
  sets[0].gamma = 2.0;
  sets[0].rho_bar = 1.0;
  sets[1].a = 0.5;
  sets[1].gamma = 1.4;
  sets[1].rho_bar = 1.0;
  sets[2].a = 2.0;
  sets[2].gamma = 3.0;
  sets[2].rho_bar = 0.8;
  for (const auto& p : sets) {
    const double c = thermo::convexity_constant(p);
    CHECK(c > 0.0);
    // gamma = 2: P'' = 2a everywhere, so the constant is exactly a.
    if (p.gamma == 2.0) CHECK(c == doctest::Approx(p.a).epsilon(1e-13));
    const double lo = 0.25 * p.rho_bar, hi = 4.0 * p.rho_bar;
    for (int i = 0; i <= 24; ++i)
      for (int j = 0; j <= 24; ++j) {
        const double rho = lo + (hi - lo) * i / 24.0;
        const double rt = lo + (hi - lo) * j / 24.0;
        const double rp = thermo::relative_pressure_potential(rho, rt, p);
        const double gap = rho - rt;
        CHECK(rp >= c * gap * gap - 1e-12 * (1.0 + rp));
      }
  }
}

TEST_CASE("residual coercivity constant and density bound") {
  std::vector<ScalingParams> sets(2);
  sets[0].a = 0.5;
  sets[0].gamma = 2.0;
  sets[0].rho_bar = 1.0;
  sets[1].a = 1.3;
  sets[1].gamma = 1.5;
  sets[1].rho_bar = 2.0;
  for (const auto& p : sets) {
    const double rb = p.rho_bar;
    const double c_res = thermo::res_coercivity_constant(p, 0.8 * rb, 1.2 * rb);
    CHECK(c_res > 0.0);
    const double K = thermo::res_density_bound(p);
    CHECK(K > 0.0);
    const std::vector<double> residual_rhos = {
        0.0,      1e-8 * rb, 0.1 * rb, 0.25 * rb, 0.5 * rb,
        2.0 * rb, 3.0 * rb,  10.0 * rb, 100.0 * rb, 1e4 * rb};
    for (double rho : residual_rhos) {
      const double wt = 1.0 + std::pow(rho, p.gamma);
      CHECK(rho / wt <= K * (1.0 + 1e-12));
      for (int j = 0; j <= 8; ++j) {
        const double rt = 0.8 * rb + 0.4 * rb * j / 8.0;
        const double rp = thermo::relative_pressure_potential(rho, rt, p);
        CHECK(rp >= c_res * wt * (1.0 - 1e-12));
      }
    }
    // The rtilde range must stay inside the open plateau.
    CHECK_THROWS_AS(thermo::res_coercivity_constant(p, 0.4 * rb, 1.0 * rb),
                    NumericalError);
  }
}
