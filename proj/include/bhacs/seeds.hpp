#pragma once

#include <cstdint>

#include "bhacs/acs.hpp"

namespace bhacs {

// Left multiplication by the imaginary quaternion (x,y,z) on R^4 = H.
// Antisymmetric; squares to -|q|^2 id, so unit quaternions give valid J's.
Mat4 left_mult_imag(double x, double y, double z);

// The standard constant structure J0 = blockdiag(rot90, rot90) = left
// multiplication by i.
Mat4 standard_j0();

// Constant compatible structure for an arbitrary constant metric,
// g^{-1/2} J0 g^{1/2}; reduces to J0 for the Euclidean metric.
CompatibleJField constant_seed(const Grid& grid, const MetricField& metric);

// J0 conjugated by a rotation field: angle theta(x) = eps sin(2 pi mode x1)
// in the (e1,e3) coordinate plane, transported to the metric frame. The plane
// is deliberately not J0-invariant so the conjugation acts nontrivially.
CompatibleJField perturbation_seed(const Grid& grid, const MetricField& metric, double eps,
                                   int mode);

// Exact discrete critical family: J(x) = left multiplication by
// (cos 2 pi k x1, sin 2 pi k x1, 0). Every matrix entry is a single Fourier
// mode, so the discrete Laplacian acts as a scalar and [lap^2 J, J] = 0 to
// rounding at every grid size. Euclidean metric only.
CompatibleJField greatcircle_seed(const Grid& grid, const MetricField& metric, int k);

// Smooth random test field: a sum of low-frequency Fourier modes (integer
// frequencies bounded by max_mode per axis) with random matrix coefficients.
EndoField random_bandlimited_endo(const Grid& grid, std::uint64_t seed, int max_mode = 2,
                                  int n_modes = 8);

// Random compatible field: polar projection of the constant seed plus uniform
// per-entry noise of the given amplitude. Regenerates (up to max_regen times,
// advancing the stream) if a draw fails the projection gate.
CompatibleJField random_compatible(const Grid& grid, const MetricField& metric,
                                   std::uint64_t seed, double amplitude = 0.3,
                                   int max_regen = 20);

}  // namespace bhacs
