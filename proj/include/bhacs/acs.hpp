#pragma once

#include "bhacs/fields.hpp"
#include "bhacs/metric.hpp"

namespace bhacs {

// Endomorphism field certified to satisfy J^2 = -id and g-skewness (gJ
// antisymmetric) at every point, with the worst violations recorded.
struct CompatibleJField {
    EndoField J;
    double max_sq_violation = 0.0;    // max_x ||J^2 + id||_F
    double max_skew_violation = 0.0;  // max_x ||gJ + J^t g||_F
};

// Field certified to lie in the tangent space at J: JS + SJ = 0 and g-skewness.
struct TangentField {
    EndoField S;
    double max_anti_violation = 0.0;  // max_x ||JS + SJ||_F
    double max_skew_violation = 0.0;  // max_x ||gS + S^t g||_F
    double max_pointwise_norm = 0.0;  // max_x ||S||_F
};

// Check the compatibility constraints everywhere; throws naming the worst
// point when a violation exceeds tol. The quadratic form J^t g J = g is
// implied by the two checked constraints and re-checked redundantly.
CompatibleJField validate(const EndoField& j, const MetricField& metric, double tol = 1e-9);

// Orthogonal projection of an arbitrary endomorphism field onto the tangent
// space at J: S = (A - A*)/4 with A = T + JTJ and A* the metric adjoint.
TangentField tangent_project(const CompatibleJField& j, const EndoField& t_field,
                             const MetricField& metric);

// Wrap a field that is already tangent (checked against tol).
TangentField validate_tangent(const CompatibleJField& j, const EndoField& s,
                              const MetricField& metric, double tol = 1e-8);

// Cayley-type retraction (id - tS) J (id - tS)^{-1}; preserves both
// constraints exactly for tangent S. Requires max |tS| entries < 0.5.
CompatibleJField retract_cayley(const CompatibleJField& j, const TangentField& s, double t,
                                const MetricField& metric);

// Nearest-structure projection: J = Q^{-1} A with A the g-skew part of M and
// Q the g-self-adjoint positive square root of -A^2. Fails if -A^2 has an
// eigenvalue below sigma_min anywhere.
CompatibleJField project_polar(const EndoField& m, const MetricField& metric,
                               double sigma_min = 0.01);

// Per-point kernel of project_polar, exposed for tests and oracles.
Mat4 project_polar_point(const Mat4& m, const MetricField& metric, double sigma_min);

// Smallest eigenvalue of -A^2 for the g-skew part A of m (the sigma_min gate).
double polar_gate_value(const Mat4& m, const MetricField& metric);

}  // namespace bhacs
