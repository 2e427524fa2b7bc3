#include "rossby/acoustic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

#include "rossby/errors.hpp"
#include "rossby/fft.hpp"
#include "rossby/operators.hpp"

namespace rossby::acoustic {

namespace {

using Matrix4cd = Eigen::Matrix4cd;
using Vector4cd = Eigen::Vector4cd;
using Vector4d = Eigen::Vector4d;

// Hermitian matrix i * D A(xi) D^{-1}, where A is the per-mode generator and
// D = diag(c/rho_bar, 1, 1, 1) the square root of the energy weight. Its real
// eigenvalues are the mode's frequencies.
Matrix4cd hermitian_generator(double xi1, double xi2, double xi3,
                              const ScalingParams& p) {
  const double c = std::sqrt(p.sound_speed_sq());
  const double inv_eps = 1.0 / p.epsilon;
  Matrix4cd h = Matrix4cd::Zero();
  // i * B with B = D A D^{-1}: the i k terms become real symmetric entries,
  // the rotation block becomes purely imaginary antisymmetric entries.
  h(0, 1) = h(1, 0) = c * xi1 * inv_eps;
  h(0, 2) = h(2, 0) = c * xi2 * inv_eps;
  h(0, 3) = h(3, 0) = c * xi3 * inv_eps;
  h(1, 2) = std::complex<double>(0.0, inv_eps);
  h(2, 1) = std::complex<double>(0.0, -inv_eps);
  return h;
}

}  // namespace

struct Propagator::ModeData {
  // Per retained half-spectrum mode: unitary eigenvectors of the Hermitian
  // generator and the real frequencies. exp(tA) = D^{-1} U exp(-i L t) U^H D.
  std::vector<Matrix4cd> U;
  std::vector<Vector4d> freq;
  std::vector<std::uint8_t> retained;
};

Propagator::Propagator(GridPtr grid, const ScalingParams& p)
    : grid_(std::move(grid)), params_(p), modes_(std::make_unique<ModeData>()) {
  p.validate();
  const Grid& g = *grid_;
  const int hx = g.nx() / 2 + 1;
  const std::size_t n_modes = g.spectral_size();
  modes_->U.resize(n_modes);
  modes_->freq.resize(n_modes);
  modes_->retained.assign(n_modes, 0);
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver;
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iy = 0; iy < g.ny(); ++iy) {
      for (int ikx = 0; ikx < hx; ++ikx) {
        const std::size_t idx =
            (static_cast<std::size_t>(iz) * g.ny() + iy) * hx + ikx;
        if (!g.mode_retained(ikx, iy, iz)) continue;
        modes_->retained[idx] = 1;
        solver.compute(hermitian_generator(g.kx(ikx), g.ky(iy), g.kz(iz), p));
        if (solver.info() != Eigen::Success)
          throw NumericalError("acoustic: eigensolve failed");
        modes_->U[idx] = solver.eigenvectors();
        modes_->freq[idx] = solver.eigenvalues();
      }
    }
  }
}

Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;
Propagator& Propagator::operator=(Propagator&&) noexcept = default;

AcousticState Propagator::propagate(const AcousticState& z0, double t) const {
  if (!same_grid(*z0.grid(), *grid_))
    throw ConfigError("acoustic propagate: state grid differs");
  const double c = std::sqrt(params_.sound_speed_sq());
  const double d0 = c / params_.rho_bar;

  Spectrum sp[4] = {spectral::forward(z0.s), spectral::forward(z0.V[0]),
                    spectral::forward(z0.V[1]), spectral::forward(z0.V[2])};
  const std::size_t n = sp[0].c.size();
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (!modes_->retained[idx]) {
      for (auto& s : sp) s.c[idx] = 0.0;
      continue;
    }
    Vector4cd w;
    w(0) = d0 * sp[0].c[idx];
    for (int j = 1; j < 4; ++j) w(j) = sp[j].c[idx];
    const Matrix4cd& u = modes_->U[idx];
    Vector4cd y = u.adjoint() * w;
    for (int j = 0; j < 4; ++j)
      y(j) *= std::exp(std::complex<double>(0.0, -modes_->freq[idx](j) * t));
    w = u * y;
    sp[0].c[idx] = w(0) / d0;
    for (int j = 1; j < 4; ++j) sp[j].c[idx] = w(j);
  }

  AcousticState out(z0.grid());
  out.t = z0.t + t;
  out.s = spectral::inverse(sp[0]);
  for (int j = 0; j < 3; ++j) out.V[j] = spectral::inverse(sp[j + 1]);
  return out;
}

double Propagator::fast_energy(const AcousticState& z) const {
  if (!same_grid(*z.grid(), *grid_))
    throw ConfigError("acoustic fast_energy: state grid differs");
  const Grid& g = *grid_;
  const double c = std::sqrt(params_.sound_speed_sq());
  const double d0 = c / params_.rho_bar;
  // Frequencies are either exactly zero (geostrophic kernel) or bounded below
  // by an O(1/eps) gap; split well inside the gap.
  const double freq_threshold = 1e-6 / params_.epsilon;

  Spectrum sp[4] = {spectral::forward(z.s), spectral::forward(z.V[0]),
                    spectral::forward(z.V[1]), spectral::forward(z.V[2])};
  const int hx = g.nx() / 2 + 1;
  double acc = 0.0;
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iy = 0; iy < g.ny(); ++iy) {
      for (int ikx = 0; ikx < hx; ++ikx) {
        const std::size_t idx =
            (static_cast<std::size_t>(iz) * g.ny() + iy) * hx + ikx;
        if (!modes_->retained[idx]) continue;
        // Half-spectrum Parseval weight: conjugate modes counted once here.
        const double weight = (ikx == 0 || ikx == g.nx() / 2) ? 1.0 : 2.0;
        Vector4cd w;
        w(0) = d0 * sp[0].c[idx];
        for (int j = 1; j < 4; ++j) w(j) = sp[j].c[idx];
        const Vector4cd y = modes_->U[idx].adjoint() * w;
        for (int j = 0; j < 4; ++j)
          if (std::abs(modes_->freq[idx](j)) > freq_threshold)
            acc += weight * std::norm(y(j));
      }
    }
  }
  return acc * g.volume();
}

std::array<double, 4> Propagator::mode_frequencies(double xi1, double xi2,
                                                   double xi3) const {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver;
  solver.compute(hermitian_generator(xi1, xi2, xi3, params_),
                 Eigen::EigenvaluesOnly);
  std::array<double, 4> out;
  for (int j = 0; j < 4; ++j) out[j] = solver.eigenvalues()(j);
  std::sort(out.begin(), out.end());
  return out;
}

double energy(const AcousticState& z, const ScalingParams& p) {
  const double w_s = p.sound_speed_sq() / (p.rho_bar * p.rho_bar);
  double acc = 0.0;
  for (std::size_t i = 0; i < z.s.v.size(); ++i) {
    acc += w_s * z.s.v[i] * z.s.v[i] + z.V[0].v[i] * z.V[0].v[i] +
           z.V[1].v[i] * z.V[1].v[i] + z.V[2].v[i] * z.V[2].v[i];
  }
  return acc / static_cast<double>(z.s.v.size()) * z.grid()->volume();
}

AcousticState propagate(const AcousticState& z0, double t,
                        const ScalingParams& p) {
  return Propagator(z0.grid(), p).propagate(z0, t);
}

std::vector<DecaySample> local_decay_profile(
    const Propagator& prop, const AcousticState& z0,
    const std::array<double, 4>& box, const std::vector<double>& times) {
  const Grid& g = *z0.grid();
  const double x0 = box[0], x1 = box[1], y0 = box[2], y1 = box[3];
  if (!(x0 < x1) || !(y0 < y1) || x0 < 0.0 || x1 > g.lx() || y0 < 0.0 ||
      y1 > g.ly())
    throw ConfigError("local_decay_profile: probe box outside the domain");

  std::vector<std::size_t> probe;
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix)
        if (g.x(ix) >= x0 && g.x(ix) <= x1 && g.y(iy) >= y0 && g.y(iy) <= y1)
          probe.push_back(g.index(ix, iy, iz));
  if (probe.empty())
    throw ConfigError("local_decay_profile: probe box contains no grid point");

  std::vector<DecaySample> out;
  out.reserve(times.size());
  for (double t : times) {
    const AcousticState z = prop.propagate(z0, t);
    DecaySample d;
    d.t = z.t;
    for (std::size_t idx : probe) {
      d.sup_s = std::max(d.sup_s, std::abs(z.s.v[idx]));
      const double v2 = z.V[0].v[idx] * z.V[0].v[idx] +
                        z.V[1].v[idx] * z.V[1].v[idx] +
                        z.V[2].v[idx] * z.V[2].v[idx];
      d.sup_v = std::max(d.sup_v, std::sqrt(v2));
    }
    d.energy = energy(z, prop.params());
    out.push_back(d);
  }
  return out;
}

}  // namespace rossby::acoustic
