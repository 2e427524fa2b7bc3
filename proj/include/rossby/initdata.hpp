#pragma once

#include <cstdint>

#include "rossby/euler.hpp"
#include "rossby/grid.hpp"
#include "rossby/thermo.hpp"

namespace rossby::initdata {

// Balanced data built from a horizontal stream function q0 (nz = 1 grid,
// zero mean, spectrally localized):
//   rho0 = rho_bar + eps q0,
//   v0   = (p'(rho_bar)/rho_bar) (perp_grad_h q0, 0),
//   m0   = rho0 v0 (pointwise; no further truncation, so a test state built
//          from the same q0 matches the data exactly).
// When out_grid is given (same box and horizontal resolution, nz >= 1) the
// data is extended x3-independently onto it. Throws ConfigError when q0 is
// not zero-mean/localized or when rho0 loses positivity.
euler::FlowState make_well_prepared(const ScalarField& q0,
                                    const ScalingParams& p,
                                    const GridPtr& out_grid = nullptr);

// Fourier low-pass regularization: zero every mode with |xi| > 1/delta
// (physical wavevector magnitude). Orthogonal projection, hence a
// contraction in L2; the identity once 1/delta exceeds all wavenumbers
// present. delta must be positive.
ScalarField regularize_delta(const ScalarField& f, double delta);
VectorField regularize_delta(const VectorField& v, double delta);

// Largest delta whose cutoff 1/delta equals half the grid's resolution
// cutoff; the default regularization scale for ill-prepared runs.
double default_delta(const Grid& g);

// Split of regularized general data into a two-dimensional geostrophic part
// and the remainder that launches fast waves:
//   [r]_delta = q0_delta + s0_delta,   [u]_delta = (v0_delta, 0) + V0_delta,
// both exact by construction, with v0_delta = perp_grad_h(q0_delta).
struct DataDecomposition {
  ScalarField q0_delta;  // nz = 1
  VectorField v0_delta;  // nz = 1, = perp_grad_h(q0_delta)
  ScalarField s0_delta;  // on the input grid
  VectorField V0_delta;  // on the input grid
};

// q0_delta solves the horizontal elliptic problem
//   (-Lap_h + 1/p'(rho_bar)) q = (1/p'(rho_bar)) avg(r_delta)
//                                 - rho_bar avg(curl_h u_delta)
// assembled from vertical averages of the regularized data. With the
// canonical normalization p'(rho_bar) = rho_bar the geostrophic part lies
// exactly in the zero-frequency kernel of the fast-wave generator; see the
// decomposition notes in the README for other parameter choices.
// Requires the data to lie in the slab symmetry class (scalars and
// horizontal components even in x3, vertical component odd; on nz = 1 this
// reduces to a vanishing vertical component).
DataDecomposition decompose_ill_prepared(const ScalarField& rho1_0,
                                         const VectorField& u0, double delta,
                                         const ScalingParams& p);

// Unbalanced data: rho0 = rho_bar + eps rho1_0, m0 = rho0 u0 (pointwise).
// Throws ConfigError when rho0 is not positive (eps too large for the
// perturbation). No balance is imposed or checked.
euler::FlowState make_ill_prepared(const ScalarField& rho1_0,
                                   const VectorField& u0,
                                   const ScalingParams& p);

// --- Data families --------------------------------------------------------
// Generators return zero-mean, dealiased horizontal fields on an nz = 1
// grid, normalized so the sup norm equals `amplitude`. Randomized families
// are deterministic in the seed (fixed-order synthesis, no library RNG).

ScalarField stream_zero(const GridPtr& g);
ScalarField stream_single_mode(const GridPtr& g, double amplitude);
ScalarField stream_two_mode(const GridPtr& g, double amplitude);
ScalarField stream_gaussian_dipole(const GridPtr& g, double amplitude);
ScalarField stream_random_band(const GridPtr& g, double amplitude,
                               std::uint64_t seed);

struct IllData {
  ScalarField rho1;
  VectorField u;
};

// Gradient (curl-free) velocity bump plus an off-center density bump: data
// with no geostrophic content beyond its horizontal mean structure.
IllData ill_divergent_bump(const GridPtr& g, double amplitude);
// Independent random band-limited density and horizontal velocity
// components; generically unbalanced.
IllData ill_random_band(const GridPtr& g, double amplitude,
                        std::uint64_t seed);

}  // namespace rossby::initdata
