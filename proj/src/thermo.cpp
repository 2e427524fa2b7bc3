#include "rossby/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "rossby/errors.hpp"

namespace rossby {

void ScalingParams::validate() const {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw ConfigError("params: epsilon must lie in (0, 1]");
  if (!(a > 0.0)) throw ConfigError("params: a must be positive");
  if (!(gamma > 1.0)) throw ConfigError("params: gamma must exceed 1");
  if (!(rho_bar > 0.0)) throw ConfigError("params: rho_bar must be positive");
}

double ScalingParams::sound_speed_sq() const {
  return a * gamma * std::pow(rho_bar, gamma - 1.0);
}

namespace thermo {

namespace {
void require_nonnegative(double rho, const char* where) {
  if (rho < 0.0 || !std::isfinite(rho))
    throw NumericalError(std::string(where) + ": density out of domain");
}
}  // namespace

double pressure(double rho, const ScalingParams& p) {
  require_nonnegative(rho, "pressure");
  return p.a * std::pow(rho, p.gamma);
}

double pressure_derivative(double rho, const ScalingParams& p) {
  require_nonnegative(rho, "pressure_derivative");
  return p.a * p.gamma * std::pow(rho, p.gamma - 1.0);
}

double pressure_potential(double rho, const ScalingParams& p) {
  require_nonnegative(rho, "pressure_potential");
  const double c = p.a / (p.gamma - 1.0);
  return c * (std::pow(rho, p.gamma) -
              rho * std::pow(p.rho_bar, p.gamma - 1.0));
}

double pressure_potential_derivative(double rho, const ScalingParams& p) {
  require_nonnegative(rho, "pressure_potential_derivative");
  const double c = p.a / (p.gamma - 1.0);
  return c * (p.gamma * std::pow(rho, p.gamma - 1.0) -
              std::pow(p.rho_bar, p.gamma - 1.0));
}

double pressure_potential_second(double rho, const ScalingParams& p) {
  require_nonnegative(rho, "pressure_potential_second");
  return p.a * p.gamma * std::pow(rho, p.gamma - 2.0);
}

double relative_pressure_potential(double rho, double rtilde,
                                   const ScalingParams& p) {
  require_nonnegative(rho, "relative_pressure_potential");
  if (!(rtilde > 0.0))
    throw NumericalError("relative_pressure_potential: rtilde must be positive");
  return pressure_potential(rho, p) - pressure_potential(rtilde, p) -
         pressure_potential_derivative(rtilde, p) * (rho - rtilde);
}

ScalarField pressure(const ScalarField& rho, const ScalingParams& p) {
  ScalarField out(rho.grid);
  for (std::size_t i = 0; i < rho.v.size(); ++i)
    out.v[i] = pressure(rho.v[i], p);
  return out;
}

namespace {
// C^infinity step: 0 for t <= 0, 1 for t >= 1, exp(-1/t) blend between.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}
}  // namespace

DensityCutoff::DensityCutoff(double rho_bar) : rho_bar_(rho_bar) {
  if (!(rho_bar > 0.0))
    throw ConfigError("DensityCutoff: rho_bar must be positive");
}

double DensityCutoff::operator()(double rho) const {
  const double rise = smooth_step((rho - support_lo()) /
                                  (plateau_lo() - support_lo()));
  const double fall = smooth_step((support_hi() - rho) /
                                  (support_hi() - plateau_hi()));
  return rise * fall;
}

std::pair<ScalarField, ScalarField> ess_res_split(const ScalarField& h,
                                                  const ScalarField& rho,
                                                  const DensityCutoff& chi) {
  require_same_grid(h, rho, "ess_res_split");
  ScalarField ess(h.grid), res(h.grid);
  for (std::size_t i = 0; i < h.v.size(); ++i) {
    const double c = chi(rho.v[i]);
    ess.v[i] = c * h.v[i];
    res.v[i] = (1.0 - c) * h.v[i];
  }
  return {std::move(ess), std::move(res)};
}

double convexity_constant(const ScalingParams& p) {
  const double lo = pressure_potential_second(0.25 * p.rho_bar, p);
  const double hi = pressure_potential_second(4.0 * p.rho_bar, p);
  return 0.5 * std::min(lo, hi);
}

double res_coercivity_constant(const ScalingParams& p, double rtilde_min,
                               double rtilde_max) {
  if (!(rtilde_min > 0.5 * p.rho_bar) || !(rtilde_max < 2.0 * p.rho_bar) ||
      rtilde_min > rtilde_max)
    throw NumericalError(
        "res_coercivity_constant: rtilde range leaves the essential plateau");
  const int n_rho = 2000;
  const int n_rt = 65;
  double cmin = p.a / (p.gamma - 1.0);  // rho -> infinity limit of the ratio
  for (int j = 0; j < n_rt; ++j) {
    const double rt = rtilde_min + (rtilde_max - rtilde_min) * j / (n_rt - 1);
    // Lower residual branch rho in [0, rho_bar/2].
    for (int i = 0; i <= n_rho; ++i) {
      const double rho = 0.5 * p.rho_bar * i / n_rho;
      const double ratio = relative_pressure_potential(rho, rt, p) /
                           (1.0 + std::pow(rho, p.gamma));
      cmin = std::min(cmin, ratio);
    }
    // Upper branch rho in [2 rho_bar, 2e4 rho_bar], log-spaced.
    for (int i = 0; i <= n_rho; ++i) {
      const double rho =
          2.0 * p.rho_bar * std::pow(1e4, static_cast<double>(i) / n_rho);
      const double ratio = relative_pressure_potential(rho, rt, p) /
                           (1.0 + std::pow(rho, p.gamma));
      cmin = std::min(cmin, ratio);
    }
  }
  if (!(cmin > 0.0))
    throw NumericalError("res_coercivity_constant: non-positive constant");
  return cmin * (1.0 - 1e-3);  // safety deflation against sampling gaps
}

double res_density_bound(const ScalingParams& p) {
  const int n = 4000;
  double kmax = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double rho_lo = 0.5 * p.rho_bar * i / n;
    kmax = std::max(kmax, rho_lo / (1.0 + std::pow(rho_lo, p.gamma)));
    const double rho_hi =
        2.0 * p.rho_bar * std::pow(1e6, static_cast<double>(i) / n);
    kmax = std::max(kmax, rho_hi / (1.0 + std::pow(rho_hi, p.gamma)));
  }
  return kmax * (1.0 + 1e-3);  // safety inflation against sampling gaps
}

}  // namespace thermo
}  // namespace rossby
