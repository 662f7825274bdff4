#include "bhacs/glue.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <sstream>

#include "bhacs/geometry.hpp"
#include "bhacs/parallel.hpp"

namespace bhacs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double smoothstep5(double s) { return ((6.0 * s - 15.0) * s + 10.0) * s * s * s; }
double smoothstep5_d1(double s) { return 30.0 * s * s * (s - 1.0) * (s - 1.0); }
double smoothstep5_d2(double s) { return 60.0 * s * (s - 1.0) * (2.0 * s - 1.0); }

// Piecewise-quadratic unit bump for j = 2: B(0) = 1, B(1) = B'(1) = 0,
// |B'| <= 2, |B''| = 4 (the curvature-optimal "bang-bang" shape).
double bump2(double z) {
    if (z >= 1.0) return 0.0;
    if (z <= 0.5) return 1.0 - 2.0 * z * z;
    const double u = 1.0 - z;
    return 2.0 * u * u;
}
double bump2_d1(double z) {
    if (z >= 1.0) return 0.0;
    if (z <= 0.5) return -4.0 * z;
    return -4.0 * (1.0 - z);
}
double bump2_d2(double z) {
    if (z >= 1.0) return 0.0;
    return (z <= 0.5) ? -4.0 : 4.0;
}

// Accelerate / coast / decelerate / plateau climb for j = 3, 4: reaches the
// pin height v at offset w with curvature A and slope sigma = A t1, then
// levels off at V before the midpoint. All pieces meet C^1.
struct Climb {
    double a = 0.0;      // curvature magnitude during accel/decel
    double t1 = 0.0;     // accel duration
    double w = 0.0;      // pin offset (= 1/j^2)
    double v = 0.0;      // pin height
    double sigma = 0.0;  // coast slope
    double top = 0.0;    // plateau height

    double value(double s) const {
        if (s <= 0.0) return 0.0;
        if (s <= t1) return 0.5 * a * s * s;
        if (s <= w) return v - sigma * (w - s);
        if (s <= w + t1) {
            const double u = s - w;
            return v + sigma * u - 0.5 * a * u * u;
        }
        return top;
    }
    double slope(double s) const {
        if (s <= 0.0) return 0.0;
        if (s <= t1) return a * s;
        if (s <= w) return sigma;
        if (s <= w + t1) return sigma - a * (s - w);
        return 0.0;
    }
    double curv(double s) const {
        if (s <= 0.0) return 0.0;
        if (s <= t1) return a;
        if (s <= w) return 0.0;
        if (s <= w + t1) return -a;
        return 0.0;
    }
};

Climb make_climb(int j) {
    Climb c;
    c.a = 0.9;
    c.w = 1.0 / (static_cast<double>(j) * j);
    c.v = 1.0 / (10.0 * j * j * j);
    const double disc = c.w * c.w - 2.0 * c.v / c.a;
    if (disc <= 0.0) throw Error("GlueProfile: climb schedule infeasible");
    c.t1 = c.w - std::sqrt(disc);
    c.sigma = c.a * c.t1;
    c.top = c.v + 0.5 * c.sigma * c.t1;
    if (c.w + c.t1 >= 0.5 / j)
        throw Error("GlueProfile: climb schedule does not fit the half annulus");
    return c;
}

double periodic_dist(const Grid& g, std::size_t idx, const std::array<int, 4>& center) {
    int c[4];
    g.decode(idx, c[0], c[1], c[2], c[3]);
    double d2 = 0.0;
    for (int p = 0; p < 4; ++p) {
        const double d = periodic_delta(g.coord(g.wrap(center[p])), g.coord(c[p]));
        d2 += d * d;
    }
    return std::sqrt(d2);
}

// Interpolated deviation from `base`: corner values are shifted by -base
// before weighting, so a constant field yields an exact zero (every corner
// difference is exactly 0) independent of weight rounding.
Mat4 sample_deviation(const EndoField& f, const std::array<double, 4>& y, const Mat4& base) {
    const Grid& g = f.grid;
    int bc[4];
    double frac[4];
    for (int p = 0; p < 4; ++p) {
        const double u = y[p] / g.h;
        const double fl = std::floor(u);
        bc[p] = g.wrap(static_cast<int>(fl));
        frac[p] = u - fl;
    }
    Mat4 acc = Mat4::zero();
    for (int corner = 0; corner < 16; ++corner) {
        double wgt = 1.0;
        int c[4];
        for (int p = 0; p < 4; ++p) {
            const int bit = (corner >> p) & 1;
            wgt *= bit ? frac[p] : (1.0 - frac[p]);
            c[p] = bit ? g.wrap(bc[p] + 1) : bc[p];
        }
        if (wgt == 0.0) continue;
        acc += wgt * (f[g.index(c[0], c[1], c[2], c[3])] - base);
    }
    return acc;
}

struct ProfileChecks {
    double max_psi1 = 0.0, max_psi2 = 0.0, max_rho = 0.0;
};

}  // namespace

GlueProfile GlueProfile::standard(int j) {
    if (j < 2 || j > 4)
        throw Error("GlueProfile: only j in {2, 3, 4} admits a profile within the "
                    "derivative budget (requested j = " + std::to_string(j) + ")");
    GlueProfile p;
    p.j = j;
    p.delta1 = 1.0 / j;
    p.rho_bar = 1.0 / (10.0 * j * j);
    const double lo = 1.0 - p.delta1;
    const double jd = static_cast<double>(j);

    p.psi_fn = [lo, jd](double r) {
        if (r <= lo) return 0.0;
        if (r >= 1.0) return 1.0;
        const double s = (r - lo) * jd;
        if (s <= 0.0) return 0.0;
        if (s >= 1.0) return 1.0;
        return smoothstep5(s);
    };
    auto psi_d1 = [lo, jd](double r) {
        const double s = (r - lo) * jd;
        if (s <= 0.0 || s >= 1.0) return 0.0;
        return jd * smoothstep5_d1(s);
    };
    auto psi_d2 = [lo, jd](double r) {
        const double s = (r - lo) * jd;
        if (s <= 0.0 || s >= 1.0) return 0.0;
        return jd * jd * smoothstep5_d2(s);
    };

    const double v = p.delta1 * p.rho_bar;
    std::function<double(double)> rho_d1, rho_d2;
    if (j == 2) {
        const double quarter = 0.25;  // half-width of the annulus
        p.rho_fn = [v, quarter](double r) {
            if (r <= 0.5 || r >= 1.0) return 0.0;
            const double z = std::abs(r - 0.75) / quarter;
            return v * bump2(z);
        };
        rho_d1 = [v, quarter](double r) {
            const double z = std::abs(r - 0.75) / quarter;
            const double sgn = (r >= 0.75) ? 1.0 : -1.0;
            return sgn * v * bump2_d1(z) / quarter;
        };
        rho_d2 = [v, quarter](double r) {
            const double z = std::abs(r - 0.75) / quarter;
            return v * bump2_d2(z) / (quarter * quarter);
        };
    } else {
        const Climb cl = make_climb(j);
        const double half = 0.5 / j;
        auto fold = [lo, half](double r, double& sgn) {
            double s = r - lo;
            sgn = 1.0;
            if (s > half) {
                s = 2.0 * half - s;
                sgn = -1.0;
            }
            return s;
        };
        p.rho_fn = [cl, fold, lo](double r) {
            if (r <= lo || r >= 1.0) return 0.0;
            double sgn;
            const double s = fold(r, sgn);
            return cl.value(s);
        };
        rho_d1 = [cl, fold](double r) {
            double sgn;
            const double s = fold(r, sgn);
            return sgn * cl.slope(s);
        };
        rho_d2 = [cl, fold](double r) {
            double sgn;
            const double s = fold(r, sgn);
            return cl.curv(s);
        };
    }

    // Sampled verification with the analytic piecewise derivatives.
    const double p1 = lo + p.delta1 / j;   // inner pin
    const double p2 = 1.0 - p.delta1 / j;  // outer pin
    if (std::abs(p.rho_fn(p1) - v) > 1e-12 || std::abs(p.rho_fn(p2) - v) > 1e-12)
        throw Error("GlueProfile: pin values not met");
    if (p.psi_fn(lo) != 0.0 || p.psi_fn(1.0) != 1.0 || p.rho_fn(lo) != 0.0 ||
        p.rho_fn(1.0) != 0.0)
        throw Error("GlueProfile: endpoint values not met");
    ProfileChecks checks;
    const int samples = 10000;
    for (int i = 0; i <= samples; ++i) {
        const double r = lo + p.delta1 * static_cast<double>(i) / samples;
        checks.max_psi1 = std::max(checks.max_psi1, std::abs(psi_d1(r)));
        checks.max_psi2 = std::max(checks.max_psi2, std::abs(psi_d2(r)));
        checks.max_rho = std::max(checks.max_rho, std::abs(rho_d1(r)) + std::abs(rho_d2(r)));
        const double rv = p.rho_fn(r);
        if (rv < -1e-15 || rv > p.rho_bar + 1e-15)
            throw Error("GlueProfile: rho out of range");
        if (r < p1 - 1e-12 || r > p2 + 1e-12) {
            if (rv > v + 1e-15) throw Error("GlueProfile: rho exceeds pin height on the edges");
        } else if (rv < v - 1e-15) {
            throw Error("GlueProfile: rho below pin height in the middle");
        }
    }
    if (checks.max_psi1 > 3.0 * j || checks.max_psi2 > 10.0 * j * j ||
        checks.max_rho > 1.0)
        throw Error("GlueProfile: sampled derivative bounds violated");
    p.measured_psi1 = checks.max_psi1;
    p.measured_psi2 = checks.max_psi2;
    p.measured_rho_bound = checks.max_rho;
    p.verified = true;
    return p;
}

GlueProfile GlueProfile::constant_rho(double rho_value) {
    if (!(rho_value >= 0.0)) throw Error("GlueProfile: constant rho must be >= 0");
    GlueProfile p;
    p.j = 1;
    p.delta1 = 1.0;
    p.rho_bar = rho_value;
    p.psi_fn = [](double r) { return r >= 1.0 ? 1.0 : 0.0; };
    p.rho_fn = [rho_value](double) { return rho_value; };
    return p;
}

double MollifierKernel::phi(double r) {
    if (r >= 1.0) return 0.0;
    const double u = 1.0 - r * r;
    return (20.0 / (kPi * kPi)) * u * u * u;
}

MollifierKernel MollifierKernel::standard() {
    MollifierKernel k;
    const int per_axis = 7;
    std::vector<double> raw;
    for (int i0 = 0; i0 < per_axis; ++i0)
        for (int i1 = 0; i1 < per_axis; ++i1)
            for (int i2 = 0; i2 < per_axis; ++i2)
                for (int i3 = 0; i3 < per_axis; ++i3) {
                    const std::array<double, 4> z = {
                        -1.0 + (i0 + 0.5) * 2.0 / per_axis, -1.0 + (i1 + 0.5) * 2.0 / per_axis,
                        -1.0 + (i2 + 0.5) * 2.0 / per_axis, -1.0 + (i3 + 0.5) * 2.0 / per_axis};
                    const double r =
                        std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]);
                    const double w = phi(r);
                    if (w <= 0.0) continue;
                    k.nodes.push_back(z);
                    raw.push_back(w);
                }
    const double total = pairwise_sum(raw);
    k.weights.resize(raw.size());
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
        k.weights[i] = raw[i] / total;
        partial += k.weights[i];
    }
    k.weights.back() = 1.0 - partial;  // weights sum to 1 exactly
    return k;
}

EndoField cutoff_interpolate(const CompatibleJField& j_out, const CompatibleJField& j_in,
                             const GlueProfile& profile, const std::array<int, 4>& center,
                             double scale) {
    require_same_grid(j_out.J.grid, j_in.J.grid, "cutoff_interpolate");
    if (!(scale > 0.0)) throw Error("cutoff_interpolate: scale must be positive");
    if (!profile.psi_fn) throw Error("cutoff_interpolate: profile has no psi");
    const Grid& g = j_out.J.grid;
    const double lo = 1.0 - profile.delta1;
    EndoField out(g);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const double r = periodic_dist(g, idx, center) / scale;
        if (r >= 1.0) {
            out[idx] = j_out.J[idx];
        } else if (r <= lo) {
            out[idx] = j_in.J[idx];
        } else {
            const double t = 1.0 - profile.psi(r);
            out[idx] = j_out.J[idx] + t * (j_in.J[idx] - j_out.J[idx]);
        }
    });
    return out;
}

EndoField mollify_variable(const EndoField& m, const GlueProfile& profile,
                           const MollifierKernel& kernel, const std::array<int, 4>& center,
                           double scale, MollifyStats* stats) {
    if (!(scale > 0.0)) throw Error("mollify_variable: scale must be positive");
    if (!profile.rho_fn) throw Error("mollify_variable: profile has no rho");
    if (kernel.nodes.empty()) throw Error("mollify_variable: empty kernel");
    const Grid& g = m.grid;
    EndoField out(g);
    std::atomic<std::size_t> mollified{0}, degraded{0};
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const double r = periodic_dist(g, idx, center) / scale;
        const double radius = profile.rho(r) * scale;
        if (radius <= 0.0) {
            out[idx] = m[idx];
            return;
        }
        if (radius < 2.0 * g.h) {
            out[idx] = m[idx];
            degraded.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        mollified.fetch_add(1, std::memory_order_relaxed);
        int c[4];
        g.decode(idx, c[0], c[1], c[2], c[3]);
        const std::array<double, 4> x = {g.coord(c[0]), g.coord(c[1]), g.coord(c[2]),
                                         g.coord(c[3])};
        // Deviation form: the base value plus weighted sampled differences, so
        // constant fields pass through bit-exactly.
        const Mat4 base = m[idx];
        Mat4 dev = Mat4::zero();
        for (std::size_t i = 0; i < kernel.nodes.size(); ++i) {
            std::array<double, 4> y;
            for (int p = 0; p < 4; ++p) y[p] = x[p] + radius * kernel.nodes[i][p];
            dev += kernel.weights[i] * sample_deviation(m, y, base);
        }
        out[idx] = base + dev;
    });
    if (stats) {
        stats->mollified_points = mollified.load();
        stats->degraded_points = degraded.load();
    }
    return out;
}

GlueResult glue(const CompatibleJField& j_out, const CompatibleJField& j_in,
                const GlueProfile& profile, const MollifierKernel& kernel,
                const std::array<int, 4>& center, double scale, const MetricField& metric,
                const GlueOptions& opts) {
    require_same_grid(j_out.J.grid, j_in.J.grid, "glue");
    if (!(scale > 0.0)) throw Error("glue: scale must be positive");
    const Grid& g = j_out.J.grid;
    const double lo = 1.0 - profile.delta1;

    // Region bookkeeping: normalized radius per point.
    std::vector<double> radius(g.npts);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        radius[idx] = periodic_dist(g, idx, center) / scale;
    });

    auto annulus_energy_of = [&](const EndoField& f) {
        const EndoField lap = rough_laplacian(f, metric);
        std::vector<double> buf(g.npts, 0.0);
        parallel_for(0, g.npts, [&](std::size_t idx) {
            if (radius[idx] > lo && radius[idx] < 1.0)
                buf[idx] = metric.endo_norm_sq(lap[idx]);
        });
        const double cell = metric.sqrt_det * g.h * g.h * g.h * g.h;
        return pairwise_sum(buf) * cell;
    };

    // Local energy of j_out over the annulus neighborhood (the region the
    // mollifier can see), used both as a gate and as a reported diagnostic.
    double mu_nb = 0.0;
    {
        const ScalarField hsq = hessian_norm_sq(j_out.J, metric);
        const ScalarField gsq = grad_norm_sq(j_out.J, metric);
        std::vector<double> buf(g.npts, 0.0);
        parallel_for(0, g.npts, [&](std::size_t idx) {
            if (radius[idx] >= lo - profile.rho_bar && radius[idx] <= 1.0 + profile.rho_bar)
                buf[idx] = hsq[idx] + gsq[idx] * gsq[idx];
        });
        const double cell = metric.sqrt_det * g.h * g.h * g.h * g.h;
        mu_nb = pairwise_sum(buf) * cell;
    }

    GlueResult res;
    res.mu_neighborhood = mu_nb;

    const bool identical =
        std::memcmp(j_out.J.data.data(), j_in.J.data.data(),
                    j_out.J.data.size() * sizeof(Mat4)) == 0;
    if (identical) {  // identical inputs pass through bit-exactly
        res.j_glued = j_out;
        res.annulus_energy = annulus_energy_of(j_out.J);
        return res;
    }

    double closeness = 0.0;
    for (std::size_t idx = 0; idx < g.npts; ++idx) {
        if (radius[idx] > lo && radius[idx] < 1.0)
            closeness = std::max(closeness, frob_norm(j_out.J[idx] - j_in.J[idx]));
    }
    if (closeness > opts.close_tol && mu_nb > opts.eps0) {
        std::ostringstream msg;
        msg << "glue: inputs are neither pointwise close on the annulus (max distance "
            << closeness << " > " << opts.close_tol << ") nor locally small in energy (mu "
            << mu_nb << " > " << opts.eps0 << ")";
        throw Error(msg.str());
    }

    EndoField mixed = cutoff_interpolate(j_out, j_in, profile, center, scale);
    EndoField smoothed =
        mollify_variable(mixed, profile, kernel, center, scale, &res.mollify_stats);

    // Polar projection on the annulus only; everything else is already a
    // bit-exact copy of a compatible input.
    std::vector<double> gate(g.npts, 1.0);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        if (radius[idx] > lo && radius[idx] < 1.0)
            gate[idx] = polar_gate_value(smoothed[idx], metric);
    });
    std::size_t worst = 0;
    for (std::size_t idx = 1; idx < g.npts; ++idx)
        if (gate[idx] < gate[worst]) worst = idx;
    if (gate[worst] < opts.sigma_min) {
        int c[4];
        g.decode(worst, c[0], c[1], c[2], c[3]);
        const Mat4 a = 0.5 * (smoothed[worst] - metric.adjoint(smoothed[worst]));
        std::ostringstream msg;
        msg << "glue: projection degenerate on the annulus at point (" << c[0] << ", " << c[1]
            << ", " << c[2] << ", " << c[3] << "): smallest eigenvalue of -A^2 is "
            << gate[worst] << " < " << opts.sigma_min << ", ||A^2 + id|| = "
            << frob_norm(a * a + Mat4::identity());
        throw Error(msg.str());
    }
    parallel_for(0, g.npts, [&](std::size_t idx) {
        if (radius[idx] > lo && radius[idx] < 1.0)
            smoothed[idx] = project_polar_point(smoothed[idx], metric, opts.sigma_min);
    });

    res.j_glued = validate(smoothed, metric);
    res.annulus_energy = annulus_energy_of(res.j_glued.J);
    return res;
}

PoincareCheck poincare_check(const EndoField& m, const MollifierKernel& kernel,
                             const std::array<int, 4>& center, double radius) {
    if (!(radius > 0.0)) throw Error("poincare_check: radius must be positive");
    (void)kernel;  // the weighting uses the kernel's radial profile directly
    const Grid& g = m.grid;
    std::vector<std::size_t> ball;
    std::vector<double> wphi;
    for (std::size_t idx = 0; idx < g.npts; ++idx) {
        const double d = periodic_dist(g, idx, center);
        if (d <= radius) {
            ball.push_back(idx);
            wphi.push_back(MollifierKernel::phi(d / radius));
        }
    }
    if (ball.empty()) throw Error("poincare_check: ball contains no grid points");
    const double wsum = pairwise_sum(wphi);
    if (!(wsum > 0.0)) throw Error("poincare_check: kernel weights vanish on the ball");
    Mat4 mean = Mat4::zero();
    for (std::size_t i = 0; i < ball.size(); ++i) mean += (wphi[i] / wsum) * m[ball[i]];

    std::vector<double> dev(ball.size()), grad(ball.size());
    const double ih = 0.5 / g.h;
    for (std::size_t i = 0; i < ball.size(); ++i) {
        const std::size_t idx = ball[i];
        dev[i] = frob_sq(m[idx] - mean);
        double gsum = 0.0;
        for (int p = 0; p < 4; ++p) {
            Mat4 d = m[g.shift(idx, p, +1)] - m[g.shift(idx, p, -1)];
            d *= ih;
            gsum += frob_sq(d);
        }
        grad[i] = gsum;
    }
    const double cell = g.h * g.h * g.h * g.h;
    PoincareCheck out;
    const double r2 = radius * radius;
    out.lhs = pairwise_sum(dev) * cell / (r2 * r2);
    out.rhs = pairwise_sum(grad) * cell / r2;
    return out;
}

}  // namespace bhacs
