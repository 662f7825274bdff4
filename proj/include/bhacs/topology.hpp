#pragma once

#include <array>
#include <vector>

#include "bhacs/acs.hpp"
#include "bhacs/fields.hpp"

namespace bhacs {

// First-Chern-class 2-form and its six periods over the coordinate 2-tori.
// Pointwise gamma_pq = (1/8 pi) * B(grad_p J, grad_q J) with the pairing
// B(A,B) = (1/2) sum omega_ab A^a_c B^b_d g^{cd}; periods are the gamma
// integrals over each coordinate 2-plane averaged over the transverse torus,
// normalized so sphere-map seeds of plane degree d yield the integer d.
struct ChernForm {
    TwoFormField gamma;
    std::array<double, 6> periods{};
};

// Euclidean metric only (the curvature contribution vanishes there).
ChernForm chern_form(const CompatibleJField& j, const MetricField& metric);

// Compatible structure from a sphere-valued map: J(x) = left multiplication
// by the unit imaginary quaternion n(x). The map winds `degree` times in one
// chosen coordinate 2-plane (a polar bump of radius 0.49 centered mid-plane)
// and is the constant base point (1,0,0) elsewhere. At most one of the six
// plane degrees may be nonzero; richer degree combinations are not realizable
// in this one-bump family and are rejected.
CompatibleJField sphere_map_seed(const std::array<int, 6>& degrees, const Grid& grid,
                                 const MetricField& metric);

struct DriftReport {
    double max_drift = 0.0;           // max |period(t) - period(0)| over t and components
    std::array<double, 6> first{};
    std::array<double, 6> last{};
};

// Period drift across a sampled field trajectory.
DriftReport chern_trajectory(const std::vector<CompatibleJField>& trace,
                             const MetricField& metric);

// Same report from precomputed period samples (streaming-friendly).
DriftReport chern_trajectory(const std::vector<std::array<double, 6>>& period_history);

}  // namespace bhacs
