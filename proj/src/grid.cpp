#include "rossby/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rossby/errors.hpp"

namespace rossby {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int nx, int ny, int nz, double lx, double ly)
    : nx_(nx), ny_(ny), nz_(nz), lx_(lx), ly_(ly), lz_(1.0) {
  const double two_pi = 2.0 * std::numbers::pi;
  kx_.resize(nx_ / 2 + 1);
  for (int i = 0; i <= nx_ / 2; ++i) kx_[i] = two_pi * i / lx_;
  ky_.resize(ny_);
  for (int j = 0; j < ny_; ++j) {
    const int k = (j <= ny_ / 2) ? j : j - ny_;
    ky_[j] = two_pi * k / ly_;
  }
  kz_.resize(nz_);
  for (int m = 0; m < nz_; ++m) {
    const int k = (m <= nz_ / 2) ? m : m - nz_;
    kz_[m] = two_pi * k / lz_;
  }
}

std::shared_ptr<const Grid> Grid::make(int nx, int ny, int nz, double lx,
                                       double ly) {
  if (nx < 4 || ny < 4 || !power_of_two(nx) || !power_of_two(ny))
    throw ConfigError("grid: nx and ny must be powers of two, at least 4");
  if (nz < 1) throw ConfigError("grid: nz must be at least 1");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw ConfigError("grid: box lengths must be positive");
  return std::shared_ptr<const Grid>(new Grid(nx, ny, nz, lx, ly));
}

double Grid::min_spacing() const {
  double h = std::min(dx(), dy());
  if (nz_ > 1) h = std::min(h, dz());
  return h;
}

bool Grid::mode_retained(int ikx, int iy, int iz) const {
  const int ky_int = (iy <= ny_ / 2) ? iy : iy - ny_;
  const int kz_int = (iz <= nz_ / 2) ? iz : iz - nz_;
  return ikx <= dealias_keep(nx_) && std::abs(ky_int) <= dealias_keep(ny_) &&
         std::abs(kz_int) <= dealias_keep(nz_);
}

double Grid::max_retained_k() const {
  const double two_pi = 2.0 * std::numbers::pi;
  const double kx_max = two_pi * dealias_keep(nx_) / lx_;
  const double ky_max = two_pi * dealias_keep(ny_) / ly_;
  const double kz_max = two_pi * dealias_keep(nz_) / lz_;
  return std::sqrt(kx_max * kx_max + ky_max * ky_max + kz_max * kz_max);
}

bool same_grid(const Grid& a, const Grid& b) {
  return a.nx() == b.nx() && a.ny() == b.ny() && a.nz() == b.nz() &&
         a.lx() == b.lx() && a.ly() == b.ly();
}

void require_same_grid(const ScalarField& a, const ScalarField& b,
                       const char* where) {
  if (!a.grid || !b.grid || !same_grid(*a.grid, *b.grid))
    throw ConfigError(std::string(where) + ": fields live on different grids");
}

}  // namespace rossby
