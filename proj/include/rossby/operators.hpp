#pragma once

#include "rossby/grid.hpp"

namespace rossby::spectral {

// All operators are pure: they take fields by const reference and return new
// fields. Differentiation happens in Fourier space (multiply by i*k); the
// Nyquist mode of a differentiated axis is zeroed, which is exact for every
// dealiased field.

// Zero the top third of the mode range in each axis (2/3 rule). Quadratic
// products of dealiased fields evaluated pointwise then re-dealiased are
// exactly the Galerkin-truncated products.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

VectorField grad(const ScalarField& f);          // (d1 f, d2 f, d3 f)
VectorField grad_h(const ScalarField& f);        // (d1 f, d2 f, 0)
VectorField perp_grad_h(const ScalarField& f);   // (-d2 f, d1 f, 0)
ScalarField div(const VectorField& v);           // d1 v1 + d2 v2 + d3 v3
ScalarField div_h(const VectorField& v);         // d1 v1 + d2 v2
ScalarField curl_h(const VectorField& v);        // d1 v2 - d2 v1
ScalarField laplacian_h(const ScalarField& f);   // d11 f + d22 f

// Solve (-Lap_h + alpha) q = f for alpha >= 0, per horizontal Fourier mode.
// For alpha = 0 the horizontal-mean part of f is removed first (it is not in
// the operator's range) and the solution's gauge is fixed by a zero mean; the
// removed mean is reported through removed_mean when non-null.
ScalarField solve_helmholtz_h(const ScalarField& f, double alpha,
                              double* removed_mean = nullptr);

// Average over x3; returns a field on the nz = 1 grid with the same box.
ScalarField vertical_average(const ScalarField& f);
// x3-independent extension of a 2D (nz = 1) field onto a 3D grid.
ScalarField lift_vertical(const ScalarField& f2d, const GridPtr& g3d);

// Projections onto the slab symmetry class: scalars and horizontal vector
// components even in x3, vertical components odd. Idempotent.
ScalarField symmetrize_even(const ScalarField& f);
ScalarField symmetrize_odd(const ScalarField& f);
VectorField symmetrize_flow(const VectorField& v);  // (even, even, odd)

// Grid-mean quadrature: exact for resolved trigonometric integrands.
double mean(const ScalarField& f);
double integral(const ScalarField& f);  // mean * box volume
double max_abs(const ScalarField& f);
double max_abs(const VectorField& v);   // max over points of |v| (Euclidean)

// Access one complex coefficient by integer mode (kx >= 0 half-spectrum).
std::complex<double> mode_coefficient(const Spectrum& s, int kx, int ky,
                                      int kz);

}  // namespace rossby::spectral
