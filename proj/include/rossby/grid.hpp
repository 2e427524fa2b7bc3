#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace rossby {

// Periodic box [0,lx) x [0,ly) x [0,lz) sampled on a uniform nx x ny x nz
// grid. The vertical period lz is fixed to 1 (slab geometry); nz = 1 gives a
// purely two-dimensional field set. Grids are immutable and shared by the
// fields living on them.
class Grid {
 public:
  static std::shared_ptr<const Grid> make(int nx, int ny, int nz, double lx,
                                          double ly);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double lz() const { return lz_; }

  std::size_t size() const {
    return static_cast<std::size_t>(nx_) * ny_ * nz_;
  }
  // Number of retained complex modes in the half-spectrum layout
  // (nz, ny, nx/2+1), x fastest.
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(nz_) * ny_ * (nx_ / 2 + 1);
  }

  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }
  double dz() const { return lz_ / nz_; }
  // Smallest spacing among axes that carry more than one point.
  double min_spacing() const;
  double volume() const { return lx_ * ly_ * lz_; }

  double x(int i) const { return dx() * i; }
  double y(int j) const { return dy() * j; }
  double z(int k) const { return dz() * k; }

  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * ny_ + iy) * nx_ + ix;
  }

  // Wavenumbers 2*pi*k/L in the standard symmetric integer range. kx covers
  // only 0..nx/2 (half-spectrum); ky, kz cover the full signed range.
  double kx(int i) const { return kx_[i]; }
  double ky(int j) const { return ky_[j]; }
  double kz(int k) const { return kz_[k]; }
  const std::vector<double>& kx() const { return kx_; }
  const std::vector<double>& ky() const { return ky_; }
  const std::vector<double>& kz() const { return kz_; }

  // Largest per-axis integer mode index kept by the two-thirds dealiasing
  // rule, and the corresponding largest retained |k| in each direction.
  int dealias_keep(int n) const { return n > 1 ? n / 3 : 0; }
  // True if the (half-spectrum) mode indices survive dealiasing.
  bool mode_retained(int ikx, int iy, int iz) const;
  // Largest |k| over all retained modes (used for hyperviscosity scaling).
  double max_retained_k() const;

 private:
  Grid(int nx, int ny, int nz, double lx, double ly);

  int nx_, ny_, nz_;
  double lx_, ly_, lz_;
  std::vector<double> kx_, ky_, kz_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Real scalar field sampled on a grid; flat storage, x fastest:
// index = (iz*ny + iy)*nx + ix.
struct ScalarField {
  GridPtr grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(GridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}

  double& operator()(int ix, int iy, int iz) { return v[grid->index(ix, iy, iz)]; }
  double operator()(int ix, int iy, int iz) const { return v[grid->index(ix, iy, iz)]; }
  std::size_t size() const { return v.size(); }
};

// Three-component real vector field; components share one grid.
struct VectorField {
  std::array<ScalarField, 3> c;

  VectorField() = default;
  explicit VectorField(const GridPtr& g)
      : c{ScalarField(g), ScalarField(g), ScalarField(g)} {}

  ScalarField& operator[](int i) { return c[i]; }
  const ScalarField& operator[](int i) const { return c[i]; }
  const GridPtr& grid() const { return c[0].grid; }
};

// Half-spectrum complex coefficients, layout (iz, iy, ikx), ikx = 0..nx/2,
// normalized so that f(x) = sum_k c_k exp(i k.x) (forward carries 1/N).
struct Spectrum {
  GridPtr grid;
  std::vector<std::complex<double>> c;

  Spectrum() = default;
  explicit Spectrum(GridPtr g)
      : grid(std::move(g)), c(grid->spectral_size(), {0.0, 0.0}) {}

  std::size_t index(int ikx, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * grid->ny() + iy) *
               (grid->nx() / 2 + 1) +
           ikx;
  }
};

// Throws DimensionError-style ConfigError if the fields live on different
// grids (pointer identity is intentionally not required: equal shape+box is).
void require_same_grid(const ScalarField& a, const ScalarField& b,
                       const char* where);
bool same_grid(const Grid& a, const Grid& b);

}  // namespace rossby
