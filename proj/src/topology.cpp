#include "bhacs/topology.hpp"

#include <cmath>

#include "bhacs/parallel.hpp"
#include "bhacs/seeds.hpp"

namespace bhacs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Quintic easing with vanishing first and second derivatives at both ends.
double smoothstep5(double s) { return ((6.0 * s - 15.0) * s + 10.0) * s * s * s; }

}  // namespace

ChernForm chern_form(const CompatibleJField& j, const MetricField& metric) {
    if (!metric.is_identity)
        throw Error("chern_form: only the Euclidean metric is supported");
    const Grid& g = j.J.grid;
    ChernForm out{TwoFormField(g), {}};
    // Normalization fixed once by calibration: a seed whose underlying map
    // has solid-angle degree +1 must produce period +1.
    const double scale = 1.0 / (16.0 * kPi);
    // Sixth-order centered first differences. Energies keep the compact
    // stencils; here the wider stencil is what makes the discrete periods of
    // smooth winding maps integral to ~1e-4 at n = 32 (the compact stencil
    // attenuates high local frequencies and undercounts by a few percent).
    const double ih = 1.0 / (60.0 * g.h);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        Mat4 dj[4];
        for (int p = 0; p < 4; ++p) {
            dj[p] = 45.0 * (j.J[g.shift(idx, p, +1)] - j.J[g.shift(idx, p, -1)]) -
                    9.0 * (j.J[g.shift(idx, p, +2)] - j.J[g.shift(idx, p, -2)]) +
                    (j.J[g.shift(idx, p, +3)] - j.J[g.shift(idx, p, -3)]);
            dj[p] *= ih;
        }
        const Mat4 w = 0.5 * (transpose(j.J[idx]) - j.J[idx]);
        for (int c = 0; c < 6; ++c) {
            const int p = TwoFormField::pair_a[c];
            const int q = TwoFormField::pair_b[c];
            out.gamma.data[6 * idx + c] =
                scale * frob_inner(w, dj[p] * transpose(dj[q]));
        }
    });
    std::vector<double> buf(g.npts);
    for (int c = 0; c < 6; ++c) {
        for (std::size_t idx = 0; idx < g.npts; ++idx) buf[idx] = out.gamma.data[6 * idx + c];
        out.periods[c] = pairwise_sum(buf.data(), buf.size()) * g.h * g.h * g.h * g.h;
    }
    return out;
}

CompatibleJField sphere_map_seed(const std::array<int, 6>& degrees, const Grid& grid,
                                 const MetricField& metric) {
    if (!metric.is_identity)
        throw Error("sphere_map_seed: only the Euclidean metric is supported");
    int active = -1;
    for (int c = 0; c < 6; ++c) {
        if (degrees[c] == 0) continue;
        if (active >= 0)
            throw Error("sphere_map_seed: unrealizable degree combination, at most one "
                        "coordinate plane may carry a nonzero degree");
        active = c;
    }
    if (active < 0) return constant_seed(grid, metric);

    const int d = degrees[active];
    const int a = TwoFormField::pair_a[active];
    const int b = TwoFormField::pair_b[active];
    const double rho0 = 0.49;
    EndoField f(grid);
    parallel_for(0, grid.npts, [&](std::size_t idx) {
        int c[4];
        grid.decode(idx, c[0], c[1], c[2], c[3]);
        const double du = grid.coord(c[a]) - 0.5;
        const double dv = grid.coord(c[b]) - 0.5;
        const double r = std::sqrt(du * du + dv * dv);
        std::array<double, 3> n{1.0, 0.0, 0.0};
        if (r < rho0) {
            const double theta = kPi * smoothstep5(1.0 - r / rho0);
            // Clockwise angular sweep: with theta falling from pi at the bump
            // center to 0 at its rim, this orientation makes the map's
            // solid-angle degree equal +d (not -d).
            const double ang = -d * std::atan2(dv, du);
            n = {std::cos(theta), std::sin(theta) * std::cos(ang),
                 std::sin(theta) * std::sin(ang)};
        }
        f[idx] = left_mult_imag(n[0], n[1], n[2]);
    });
    return validate(f, metric);
}

DriftReport chern_trajectory(const std::vector<std::array<double, 6>>& periods) {
    if (periods.empty()) throw Error("chern_trajectory: empty trajectory");
    DriftReport rep{0.0, periods.front(), periods.back()};
    for (const auto& p : periods)
        for (int c = 0; c < 6; ++c)
            rep.max_drift = std::max(rep.max_drift, std::abs(p[c] - rep.first[c]));
    return rep;
}

DriftReport chern_trajectory(const std::vector<CompatibleJField>& trajectory,
                             const MetricField& metric) {
    if (trajectory.empty()) throw Error("chern_trajectory: empty trajectory");
    std::vector<std::array<double, 6>> periods;
    periods.reserve(trajectory.size());
    for (const CompatibleJField& j : trajectory) periods.push_back(chern_form(j, metric).periods);
    return chern_trajectory(periods);
}

}  // namespace bhacs
