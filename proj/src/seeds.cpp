#include "bhacs/seeds.hpp"

#include <cmath>

#include "bhacs/parallel.hpp"
#include "bhacs/rng.hpp"

namespace bhacs {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Mat4 left_mult_imag(double x, double y, double z) {
    Mat4 m;
    m(0, 0) = 0.0;  m(0, 1) = -x;   m(0, 2) = -y;   m(0, 3) = -z;
    m(1, 0) = x;    m(1, 1) = 0.0;  m(1, 2) = -z;   m(1, 3) = y;
    m(2, 0) = y;    m(2, 1) = z;    m(2, 2) = 0.0;  m(2, 3) = -x;
    m(3, 0) = z;    m(3, 1) = -y;   m(3, 2) = x;    m(3, 3) = 0.0;
    return m;
}

Mat4 standard_j0() { return left_mult_imag(1.0, 0.0, 0.0); }

CompatibleJField constant_seed(const Grid& grid, const MetricField& metric) {
    const Mat4 j = metric.is_identity
                       ? standard_j0()
                       : Mat4(metric.g_inv_sqrt * standard_j0() * metric.g_sqrt);
    EndoField f(grid);
    for (std::size_t i = 0; i < grid.npts; ++i) f[i] = j;
    return validate(f, metric, 1e-9);
}

CompatibleJField perturbation_seed(const Grid& grid, const MetricField& metric, double eps,
                                   int mode) {
    if (mode < 1) throw Error("perturbation_seed: mode must be >= 1");
    EndoField f(grid);
    const Mat4 j0 = standard_j0();
    parallel_for(0, grid.npts, [&](std::size_t idx) {
        int c[4];
        grid.decode(idx, c[0], c[1], c[2], c[3]);
        const double theta = eps * std::sin(kTwoPi * mode * grid.coord(c[0]));
        const double cs = std::cos(theta), sn = std::sin(theta);
        Mat4 r = Mat4::identity();
        r(0, 0) = cs; r(0, 2) = -sn;
        r(2, 0) = sn; r(2, 2) = cs;
        Mat4 j = r * j0 * transpose(r);
        if (!metric.is_identity) j = metric.g_inv_sqrt * j * metric.g_sqrt;
        f[idx] = j;
    });
    return validate(f, metric, 1e-9);
}

CompatibleJField greatcircle_seed(const Grid& grid, const MetricField& metric, int k) {
    if (!metric.is_identity)
        throw Error("greatcircle_seed: only the Euclidean metric is supported");
    EndoField f(grid);
    parallel_for(0, grid.npts, [&](std::size_t idx) {
        int c[4];
        grid.decode(idx, c[0], c[1], c[2], c[3]);
        const double a = kTwoPi * k * grid.coord(c[0]);
        f[idx] = left_mult_imag(std::cos(a), std::sin(a), 0.0);
    });
    return validate(f, metric, 1e-9);
}

EndoField random_bandlimited_endo(const Grid& grid, std::uint64_t seed, int max_mode,
                                  int n_modes) {
    Rng rng(seed);
    std::vector<std::array<double, 4>> freq(n_modes);
    std::vector<double> phase(n_modes);
    std::vector<Mat4> coef(n_modes);
    const int span = 2 * max_mode + 1;
    for (int m = 0; m < n_modes; ++m) {
        for (int p = 0; p < 4; ++p)
            freq[m][p] = static_cast<double>(
                static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(span))) - max_mode);
        phase[m] = rng.uniform(0.0, kTwoPi);
        for (int e = 0; e < 16; ++e) coef[m].a[e] = rng.uniform(-1.0, 1.0) / n_modes;
    }
    EndoField f(grid);
    parallel_for(0, grid.npts, [&](std::size_t idx) {
        int c[4];
        grid.decode(idx, c[0], c[1], c[2], c[3]);
        Mat4 acc = Mat4::zero();
        for (int m = 0; m < n_modes; ++m) {
            double arg = phase[m];
            for (int p = 0; p < 4; ++p) arg += kTwoPi * freq[m][p] * grid.coord(c[p]);
            acc += std::cos(arg) * coef[m];
        }
        f[idx] = acc;
    });
    return f;
}

CompatibleJField random_compatible(const Grid& grid, const MetricField& metric,
                                   std::uint64_t seed, double amplitude, int max_regen) {
    const CompatibleJField base = constant_seed(grid, metric);
    Rng rng(seed);
    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt <= max_regen; ++attempt) {
        EndoField m(grid);
        for (std::size_t idx = 0; idx < grid.npts; ++idx) {
            Mat4 noise;
            for (int e = 0; e < 16; ++e) noise.a[e] = rng.uniform(-amplitude, amplitude);
            m[idx] = base.J[idx] + noise;
        }
        try {
            return project_polar(m, metric);
        } catch (const Error& err) {
            last_error = err.what();
        }
    }
    throw Error("random_compatible: projection gate failed for all draws; last: " + last_error);
}

}  // namespace bhacs
