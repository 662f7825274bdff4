#pragma once

#include "bhacs/fields.hpp"
#include "bhacs/metric.hpp"

namespace bhacs {

// Pointwise first derivative along axis p: centered difference, O(h^2).
inline Mat4 diff1(const EndoField& f, const Grid& g, std::size_t idx, int p) {
    Mat4 r = f[g.shift(idx, p, +1)] - f[g.shift(idx, p, -1)];
    return r *= 0.5 / g.h;
}

// Pointwise second derivative d_p d_q: compact 3-point stencil when p == q
// (backward difference of forward differences), composed centered differences
// when p != q. Both O(h^2).
Mat4 diff2(const EndoField& f, const Grid& g, std::size_t idx, int p, int q);

// Covariant derivative of an endomorphism field. For the constant metrics
// supported here the connection coefficients vanish, so this is the centered
// coordinate derivative along each axis.
DerivField covariant_derivative(const EndoField& field, const MetricField& metric);

// Rough Laplacian g^{pq} D_p D_q applied entrywise.
EndoField rough_laplacian(const EndoField& field, const MetricField& metric);
TwoFormField rough_laplacian(const TwoFormField& omega, const MetricField& metric);

// Composition of the rough Laplacian with itself.
EndoField bi_laplacian(const EndoField& field, const MetricField& metric);

struct HodgeOps {
    ThreeFormField d_omega;
    OneFormField dstar_omega;
    TwoFormField delta_d_omega;  // (d d* + d* d) omega
};

// Exterior derivative (forward differences), codifferential (backward
// differences, the exact adjoint of d on the periodic grid) and the Hodge
// Laplacian of a 2-form. Euclidean metric only: with the mixed forward and
// backward stencils, d d* + d* d collapses to minus the rough Laplacian
// exactly, the discrete counterpart of the flat Weitzenbock identity.
HodgeOps hodge_operators(const TwoFormField& omega, const MetricField& metric);

// Pointwise |grad f|^2 with full metric contraction.
ScalarField grad_norm_sq(const EndoField& field, const MetricField& metric);

// Pointwise |Hess f|^2 (all 16 second derivatives, full contraction).
ScalarField hessian_norm_sq(const EndoField& field, const MetricField& metric);

// Integral of a scalar field: deterministic pairwise sum times sqrt(det g) h^4.
double integrate(const ScalarField& f, const MetricField& metric);

// L2 inner product of two endomorphism fields.
double l2_inner(const EndoField& a, const EndoField& b, const MetricField& metric);

double l2_norm(const EndoField& a, const MetricField& metric);

// Lower an endomorphism to its fundamental 2-form, omega_ab = (J^t g)_ab.
TwoFormField omega_from_j(const EndoField& j, const MetricField& metric);

// Norms of form fields with full contraction over all index orderings
// (|omega|^2 = sum_{a!=b} omega_ab^2 in the Euclidean case).
double form_l2_sq(const OneFormField& a, const MetricField& metric);
double form_l2_sq(const TwoFormField& a, const MetricField& metric);
double form_l2_sq(const ThreeFormField& a, const MetricField& metric);

}  // namespace bhacs
