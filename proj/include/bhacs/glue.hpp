#pragma once

#include <array>
#include <functional>

#include "bhacs/acs.hpp"

namespace bhacs {

// Annulus cutoff psi and variable mollification radius rho for sharpness j.
// The annulus is (1 - 1/j, 1) in normalized radius; rho_bar = 1/(10 j^2) and
// delta1 = 1/j. The factory profiles satisfy, with margin, the sampled bounds
// |psi'| <= 3j, |psi''| <= 10 j^2, |rho'| + |rho''| <= 10 rho_bar j^2 <= 1,
// the pin values rho(1 - 1/j + delta1/j) = rho(1 - delta1/j) = delta1 rho_bar,
// rho < delta1 rho_bar on the two edge subintervals and >= on the middle one.
// Only j in {2, 3, 4} admits such a profile: the climb from rho = 0 to the
// pin height delta1 rho_bar = 1/(10 j^3) across a window of width 1/j^2 needs
// peak curvature ~ 2 v / w^2 = j/5, which exceeds the budget for j >= 5.
struct GlueProfile {
    int j = 0;
    double rho_bar = 0.0;
    double delta1 = 0.0;
    bool verified = false;  // true when the factory ran the sampled checks
    double measured_psi1 = 0.0, measured_psi2 = 0.0;  // max |psi'|, |psi''|
    double measured_rho_bound = 0.0;                  // max |rho'| + |rho''|

    std::function<double(double)> psi_fn;
    std::function<double(double)> rho_fn;

    double psi(double r) const { return psi_fn(r); }
    double rho(double r) const { return rho_fn(r); }

    // Verified profile for j in {2, 3, 4}; throws for other j.
    static GlueProfile standard(int j);

    // Test helper: trivial psi (step at r = 1) and constant rho everywhere.
    // Not bound-checked; used to exercise the mollifier at resolvable radii.
    static GlueProfile constant_rho(double rho_value);
};

// Radial averaging kernel on the unit 4-ball with closed-form profile
// phi(r) = (20/pi^2)(1 - r^2)^3, unit mass. Discretized on a fixed symmetric
// 7-per-axis cell-centered lattice with weights normalized to sum exactly 1.
struct MollifierKernel {
    std::vector<std::array<double, 4>> nodes;
    std::vector<double> weights;

    static double phi(double r);
    static MollifierKernel standard();
};

// J_out outside radius `scale`, J_in inside scale (1 - 1/j), the psi-convex
// combination across the annulus: J_out + (J_in - J_out)(1 - psi(r)). The two
// pure regions are bit-exact copies. Output is generally not compatible.
EndoField cutoff_interpolate(const CompatibleJField& j_out, const CompatibleJField& j_in,
                             const GlueProfile& profile, const std::array<int, 4>& center,
                             double scale);

struct MollifyStats {
    std::size_t mollified_points = 0;
    std::size_t degraded_points = 0;  // rho > 0 but radius < 2h, treated as identity
};

// Per-point average over the ball of radius rho(|x-c|/scale) * scale, sampled
// by multilinear periodic interpolation; points with rho = 0 (or with a
// sub-resolution radius, which degrades to rho = 0) pass through unchanged.
EndoField mollify_variable(const EndoField& m, const GlueProfile& profile,
                           const MollifierKernel& kernel, const std::array<int, 4>& center,
                           double scale, MollifyStats* stats = nullptr);

struct GlueOptions {
    double eps0 = 0.1;       // small-energy gate on mu(annulus neighborhood)
    double close_tol = 0.5;  // pointwise closeness gate on the annulus
    double sigma_min = 0.01;
};

struct GlueResult {
    CompatibleJField j_glued;
    double annulus_energy = 0.0;   // integral of |lap J_glued|^2 over the annulus
    double mu_neighborhood = 0.0;  // mu of J_out over the annulus neighborhood
    MollifyStats mollify_stats;
};

// Full splice: polar projection of the mollified cutoff interpolation.
// Requires the inputs to be pointwise close on the annulus or the local
// energy mu of J_out near the annulus to be below eps0. Identical inputs are
// returned unchanged. Projection degeneracy on the annulus is reported as a
// glue failure naming the worst |A^2 + id|.
GlueResult glue(const CompatibleJField& j_out, const CompatibleJField& j_in,
                const GlueProfile& profile, const MollifierKernel& kernel,
                const std::array<int, 4>& center, double scale, const MetricField& metric,
                const GlueOptions& opts = {});

struct PoincareCheck {
    double lhs = 0.0;  // R^{-4} int_{B_R} |f - f_*|^2
    double rhs = 0.0;  // R^{-2} int_{B_R} |grad f|^2
};

// Both sides of the kernel-weighted Poincare inequality on a discrete ball;
// f_* is the phi-weighted average over the ball.
PoincareCheck poincare_check(const EndoField& m, const MollifierKernel& kernel,
                             const std::array<int, 4>& center, double radius);

}  // namespace bhacs
