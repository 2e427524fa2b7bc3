#pragma once

#include "rossby/grid.hpp"

namespace rossby::spectral {

// Real <-> half-complex transforms on a grid. Coefficients are normalized on
// the forward side, so forward() returns true Fourier coefficients:
//   f(x) = sum_k c_k exp(i k.x)   (Hermitian half-spectrum storage).
// Backed by per-thread cached FFTW plans (FFTW_ESTIMATE: deterministic plan
// choice); both functions are safe to call concurrently from different
// threads on different or equal grids.
Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

}  // namespace rossby::spectral
