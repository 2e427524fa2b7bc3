#include "rossby/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "rossby/errors.hpp"

namespace rossby::spectral {

namespace {

// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Workspace {
  int nx = 0, ny = 0, nz = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  Workspace(int nx_, int ny_, int nz_) : nx(nx_), ny(ny_), nz(nz_) {
    const std::size_t nreal = static_cast<std::size_t>(nx) * ny * nz;
    const std::size_t ncplx = static_cast<std::size_t>(nx / 2 + 1) * ny * nz;
    real = fftw_alloc_real(nreal);
    cplx = fftw_alloc_complex(ncplx);
    if (!real || !cplx) throw NumericalError("fft: allocation failed");
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW dimension order is slowest-first; our layout is (z, y, x).
    fwd = fftw_plan_dft_r2c_3d(nz, ny, nx, real, cplx, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_3d(nz, ny, nx, cplx, real, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw NumericalError("fft: planning failed");
  }

  ~Workspace() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(cplx);
  }

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
};

Workspace& workspace_for(const Grid& g) {
  thread_local std::map<std::tuple<int, int, int>, std::unique_ptr<Workspace>>
      cache;
  auto key = std::make_tuple(g.nx(), g.ny(), g.nz());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<Workspace>(g.nx(), g.ny(), g.nz()))
             .first;
  return *it->second;
}

}  // namespace

Spectrum forward(const ScalarField& f) {
  Workspace& ws = workspace_for(*f.grid);
  std::memcpy(ws.real, f.v.data(), f.v.size() * sizeof(double));
  fftw_execute(ws.fwd);
  Spectrum out(f.grid);
  const double scale = 1.0 / static_cast<double>(f.grid->size());
  const std::size_t n = out.c.size();
  for (std::size_t i = 0; i < n; ++i)
    out.c[i] = scale * std::complex<double>(ws.cplx[i][0], ws.cplx[i][1]);
  return out;
}

ScalarField inverse(const Spectrum& s) {
  Workspace& ws = workspace_for(*s.grid);
  const std::size_t n = s.c.size();
  for (std::size_t i = 0; i < n; ++i) {
    ws.cplx[i][0] = s.c[i].real();
    ws.cplx[i][1] = s.c[i].imag();
  }
  fftw_execute(ws.bwd);  // c2r destroys input; fine, we own the copy
  ScalarField out(s.grid);
  std::memcpy(out.v.data(), ws.real, out.v.size() * sizeof(double));
  return out;
}

}  // namespace rossby::spectral
