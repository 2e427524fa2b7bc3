#include "rossby/relative_energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rossby/errors.hpp"
#include "rossby/operators.hpp"

namespace rossby::relenergy {

namespace {

void require_positive(const ScalarField& f, const char* what) {
  for (double x : f.v)
    if (!(x > 0.0))
      throw NumericalError(std::string("relative energy: ") + what +
                           " must be positive everywhere");
}

void require_compatible(const euler::FlowState& state, const TestState& test,
                        const ScalingParams& p) {
  p.validate();
  require_same_grid(state.rho, test.rtilde, "relative_energy");
  require_positive(state.rho, "rho");
  require_positive(test.rtilde, "rtilde");
}

// Pointwise integrand of the relative energy.
double integrand(double rho, const double m[3], double rt, const double ut[3],
                 const ScalingParams& p) {
  double kin = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double d = m[c] / rho - ut[c];
    kin += d * d;
  }
  return 0.5 * rho * kin +
         thermo::relative_pressure_potential(rho, rt, p) /
             (p.epsilon * p.epsilon);
}

}  // namespace

double relative_energy(const euler::FlowState& state, const TestState& test,
                       const ScalingParams& p) {
  require_compatible(state, test, p);
  const std::size_t n = state.rho.v.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m[3] = {state.mom[0].v[i], state.mom[1].v[i],
                         state.mom[2].v[i]};
    const double ut[3] = {test.utilde[0].v[i], test.utilde[1].v[i],
                          test.utilde[2].v[i]};
    acc += integrand(state.rho.v[i], m, test.rtilde.v[i], ut, p);
  }
  return acc / static_cast<double>(n) * state.grid()->volume();
}

Report coercivity_report(const euler::FlowState& state, const TestState& test,
                         const ScalingParams& p,
                         const thermo::DensityCutoff& chi) {
  require_compatible(state, test, p);
  const std::size_t n = state.rho.v.size();

  double rt_min = 1e300, rt_max = -1e300;
  for (double x : test.rtilde.v) {
    rt_min = std::min(rt_min, x);
    rt_max = std::max(rt_max, x);
  }

  Report r;
  r.time = state.t;
  double val = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double kin = 0.0, fluct = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = state.rho.v[i];
    const double rt = test.rtilde.v[i];
    const double m[3] = {state.mom[0].v[i], state.mom[1].v[i],
                         state.mom[2].v[i]};
    const double ut[3] = {test.utilde[0].v[i], test.utilde[1].v[i],
                          test.utilde[2].v[i]};
    val += integrand(rho, m, rt, ut, p);

    const double c = chi(rho);
    double du2 = 0.0, m2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double d = m[k] / rho - ut[k];
      du2 += d * d;
      m2 += m[k] * m[k];
    }
    c1 += c * du2;
    c2 += (1.0 - c) * m2 / rho;
    c3 += c * (rho - rt) * (rho - rt);
    c4 += (1.0 - c) * (1.0 + std::pow(rho, p.gamma));
    kin += m2 / rho;
    const double f = (rho - p.rho_bar) / p.epsilon;
    fluct += f * f;
  }
  const double cell = state.grid()->volume() / static_cast<double>(n);
  r.value = val * cell;
  r.ess_velocity = c1 * cell;
  r.res_kinetic = c2 * cell;
  r.ess_density = c3 * cell;
  r.res_mass_pressure = c4 * cell;
  r.norm_sqrt_rho_u = std::sqrt(kin * cell);
  r.norm_density_fluct = std::sqrt(fluct * cell);

  const double eps_sq = p.epsilon * p.epsilon;
  const double c_conv = thermo::convexity_constant(p);
  const double c_res = thermo::res_coercivity_constant(p, rt_min, rt_max);
  const double big_k = thermo::res_density_bound(p);
  const double u_max = spectral::max_abs(test.utilde);
  const double c_eps =
      1.0 / (8.0 / p.rho_bar + 4.0 +
             eps_sq * (1.0 / c_conv +
                       (1.0 + 2.0 * u_max * u_max * big_k) / c_res));
  r.coercivity_constant = c_eps;

  // The bounds are strict with numerically certified margins; the slack only
  // absorbs summation roundoff.
  const double slack = 1e-12 * (1.0 + std::abs(r.value));
  const auto check = [&](double lower, const char* what) {
    if (r.value + slack < lower)
      throw AcceptanceError(std::string("relative energy coercivity failed: "
                                        "value below the certified bound (") +
                            what + ")");
  };
  check(p.rho_bar / 8.0 * r.ess_velocity, "essential velocity");
  check(c_conv / eps_sq * r.ess_density, "essential density");
  check(c_res / eps_sq * r.res_mass_pressure, "residual mass-pressure");
  check(c_eps * (r.ess_velocity + r.res_kinetic + r.ess_density +
                 r.res_mass_pressure),
        "component sum");
  return r;
}

TestState build_well_prepared_test(const target::TargetState& ts,
                                   const ScalingParams& p,
                                   const GridPtr& out_grid) {
  p.validate();
  const ScalarField q = target::q_from_omega(ts.omega, p);
  const VectorField v = target::velocity_from_q(q, p);

  const GridPtr g = out_grid ? out_grid : q.grid;
  const bool lift = !same_grid(*g, *q.grid);
  TestState t;
  t.rtilde = lift ? spectral::lift_vertical(q, g) : q;
  for (auto& x : t.rtilde.v) {
    x = p.rho_bar + p.epsilon * x;
    if (!(x > 0.0))
      throw ConfigError(
          "build_well_prepared_test: rtilde not positive "
          "(epsilon too large for the stream amplitude)");
  }
  t.utilde = VectorField(g);
  for (int c = 0; c < 3; ++c)
    t.utilde[c] = lift ? spectral::lift_vertical(v[c], g) : v[c];
  return t;
}

TestState build_ill_prepared_test(const target::TargetState& ts,
                                  const acoustic::AcousticState& as,
                                  const ScalingParams& p) {
  p.validate();
  if (std::abs(ts.t - as.t) > 1e-9 * (1.0 + std::abs(as.t)))
    throw ConfigError(
        "build_ill_prepared_test: limit and fast-wave states are at "
        "different times");
  const ScalarField q = target::q_from_omega(ts.omega, p);
  const VectorField v = target::velocity_from_q(q, p);

  const GridPtr& g = as.grid();
  if (!(g->nx() == q.grid->nx() && g->ny() == q.grid->ny() &&
        g->lx() == q.grid->lx() && g->ly() == q.grid->ly()))
    throw ConfigError(
        "build_ill_prepared_test: horizontal boxes do not match");
  const bool lift = !same_grid(*g, *q.grid);
  const ScalarField ql = lift ? spectral::lift_vertical(q, g) : q;

  TestState t;
  t.rtilde = ScalarField(g);
  for (std::size_t i = 0; i < t.rtilde.v.size(); ++i) {
    t.rtilde.v[i] = p.rho_bar + p.epsilon * (ql.v[i] + as.s.v[i]);
    if (!(t.rtilde.v[i] > 0.0))
      throw ConfigError(
          "build_ill_prepared_test: rtilde not positive "
          "(epsilon too large for the combined perturbation)");
  }
  t.utilde = VectorField(g);
  for (int c = 0; c < 3; ++c) {
    const ScalarField vl = lift ? spectral::lift_vertical(v[c], g) : v[c];
    for (std::size_t i = 0; i < t.utilde[c].v.size(); ++i)
      t.utilde[c].v[i] = vl.v[i] + as.V[c].v[i];
  }
  return t;
}

}  // namespace rossby::relenergy
