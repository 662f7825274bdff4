#pragma once

#include <cstdint>
#include <vector>

#include "bhacs/acs.hpp"
#include "bhacs/geometry.hpp"

namespace bhacs {

// One evaluation of the energy functionals and (optionally) the residuals.
// density_mu = |hess J|^2 + |grad J|^4 per point, density_xi = |lap J|^2 per
// point; density fields are left empty when a caller skips them.
struct EnergyReport {
    double e1 = 0.0;
    double e2 = 0.0;
    ScalarField density_mu;
    ScalarField density_xi;
    double residual_commutator = 0.0;
    double residual_strong = 0.0;
    double residual_weak_max = 0.0;
};

// e1 = integral |grad J|^2, e2 = integral |lap J|^2, with densities.
EnergyReport energy_e2(const CompatibleJField& j, const MetricField& metric,
                       bool with_densities = true);

// Gradient of the discrete e2 on the constraint manifold under the Cayley
// retraction: the tangent projection of -4 J lap^2 J, which equals
// 2 [lap^2 J, J] pointwise. The central-difference slope of
// e2(retract(J,S,t)) at t = 0 equals <gradient, S> for every tangent S.
TangentField gradient_e2(const CompatibleJField& j, const MetricField& metric);

// L2 norm of lap^2 J + J (lap^2 J) J, the commutator form of the critical
// point equation.
double residual_commutator(const CompatibleJField& j, const MetricField& metric);

// L2 norm of lap^2 J - Q with Q the first-order form
// Q = J lap J lap J + J grad_p J grad_p(lap J) + J grad_p(lap J) grad_p J
//     + J lap(grad_p J grad_p J), indices contracted with g^{pq}.
double residual_strong(const CompatibleJField& j, const MetricField& metric);

// Weak residual: max over test fields T of
// | int <lap J, lap T J - J lap T> + 2 int <lap J, grad T grad J - grad J grad T> |
// normalized by the discrete W^{2,2} norm of T.
double residual_weak(const CompatibleJField& j, const MetricField& metric,
                     const std::vector<EndoField>& tests);

// Alternative weak form used as a cross-check:
// int <lap J - J grad J grad J, lap T> + int <A, T> + int <B_p, grad_p T>
// with A = J lap J lap J + grad_p J grad_p J lap J - lap J grad_p J grad_p J
//        + grad_p J lap J grad_p J and B_p = grad_p J lap J J + J lap J grad_p J.
double residual_weak_el1(const CompatibleJField& j, const MetricField& metric,
                         const std::vector<EndoField>& tests);

// Streaming variants: generate `count` bandlimited test fields from `seed`
// one at a time (constant memory in the battery size).
double residual_weak_streaming(const CompatibleJField& j, const MetricField& metric, int count,
                               std::uint64_t seed);
double residual_weak_el1_streaming(const CompatibleJField& j, const MetricField& metric,
                                   int count, std::uint64_t seed);

// Energy of the lowered 2-form through the Hodge Laplacian,
// int |(d d* + d* d) omega|^2. Euclidean metric only. Agrees with e2.
double energy_symplectic(const CompatibleJField& j, const MetricField& metric);

// int (|d omega|^2 + |d* omega|^2); vanishes for parallel omega.
double symplectic_e1(const CompatibleJField& j, const MetricField& metric);

// Fixed-seed battery of smooth bandlimited test fields for the weak residual.
std::vector<EndoField> make_test_battery(const Grid& grid, int count, std::uint64_t seed);

// Discrete W^{2,2} norm sqrt(int |T|^2 + |grad T|^2 + |hess T|^2).
double w22_norm(const EndoField& t, const MetricField& metric);

// W^{1,2} distance between two fields.
double w12_distance(const EndoField& a, const EndoField& b, const MetricField& metric);

// Everything at once (energies, densities, all residuals); used by `verify`.
EnergyReport full_report(const CompatibleJField& j, const MetricField& metric,
                         int battery_count = 32, std::uint64_t battery_seed = 2024);

}  // namespace bhacs
