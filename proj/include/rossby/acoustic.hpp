#pragma once

#include <array>
#include <memory>
#include <vector>

#include "rossby/grid.hpp"
#include "rossby/thermo.hpp"

namespace rossby::acoustic {

// Linear fast subsystem around the reference state:
//   eps dt s + rho_bar div V = 0
//   eps dt V + (p'(rho_bar)/rho_bar) grad s + b x V = 0.
// Per Fourier mode the generator is a 4x4 matrix that is skew-adjoint in the
// energy inner product (p'(rho_bar)/rho_bar^2)|s|^2 + |V|^2, so the evolution
// is solved exactly by unitary (energy-preserving) matrix exponentials.
struct AcousticState {
  double t = 0.0;
  ScalarField s;
  VectorField V;

  AcousticState() = default;
  explicit AcousticState(const GridPtr& g) : s(g), V(g) {}
  const GridPtr& grid() const { return s.grid; }
};

class Propagator {
 public:
  Propagator(GridPtr grid, const ScalingParams& p);
  ~Propagator();
  Propagator(Propagator&&) noexcept;
  Propagator& operator=(Propagator&&) noexcept;

  // Exact solution at time z0.t + t (t may be negative: the group is
  // reversible). Modes above the dealiasing cutoff are dropped.
  AcousticState propagate(const AcousticState& z0, double t) const;

  // Energy carried by eigendirections of nonzero frequency ("fast" part);
  // the complement is the geostrophic kernel content.
  double fast_energy(const AcousticState& z) const;

  // The four real eigenfrequencies (sorted ascending) of the generator at
  // wavevector xi: the generator's spectrum is {-i f : f in frequencies}.
  std::array<double, 4> mode_frequencies(double xi1, double xi2,
                                         double xi3) const;

  const GridPtr& grid() const { return grid_; }
  const ScalingParams& params() const { return params_; }

 private:
  GridPtr grid_;
  ScalingParams params_;
  struct ModeData;
  std::unique_ptr<ModeData> modes_;
};

// Int (p'(rho_bar)/rho_bar^2) s^2 + |V|^2.
double energy(const AcousticState& z, const ScalingParams& p);

// Convenience wrapper: build a propagator and apply it once.
AcousticState propagate(const AcousticState& z0, double t,
                        const ScalingParams& p);

struct DecaySample {
  double t = 0.0;
  double sup_s = 0.0;   // sup over the probe box of |s|
  double sup_v = 0.0;   // sup over the probe box of |V|
  double energy = 0.0;  // total energy (conserved; recorded as a check)
};

// Horizontal probe box [x0,x1] x [y0,y1] (all x3); must lie inside the
// domain. Samples the exact evolution at the given times.
std::vector<DecaySample> local_decay_profile(const Propagator& prop,
                                             const AcousticState& z0,
                                             const std::array<double, 4>& box,
                                             const std::vector<double>& times);

}  // namespace rossby::acoustic
