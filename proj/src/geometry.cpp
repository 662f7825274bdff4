#include "bhacs/geometry.hpp"

#include "bhacs/parallel.hpp"

namespace bhacs {

namespace {

// Wrap-corrected neighbour indices of one point along all four axes.
struct Neighbors {
    std::size_t up[4];
    std::size_t dn[4];
    int c[4];
};

inline Neighbors neighbors_of(const Grid& g, std::size_t idx) {
    Neighbors nb;
    g.decode(idx, nb.c[0], nb.c[1], nb.c[2], nb.c[3]);
    const std::size_t s3 = 1, s2 = static_cast<std::size_t>(g.n);
    const std::size_t s1 = s2 * g.n, s0 = s1 * g.n;
    const std::size_t stride[4] = {s0, s1, s2, s3};
    for (int a = 0; a < 4; ++a) {
        nb.up[a] = (nb.c[a] + 1 == g.n) ? idx - stride[a] * (g.n - 1) : idx + stride[a];
        nb.dn[a] = (nb.c[a] == 0) ? idx + stride[a] * (g.n - 1) : idx - stride[a];
    }
    return nb;
}

inline std::size_t stride_of(const Grid& g, int axis) {
    std::size_t s = 1;
    for (int a = 3; a > axis; --a) s *= g.n;
    return s;
}

inline std::size_t step_axis(const Grid& g, std::size_t idx, int coord, int axis, int dir) {
    const std::size_t s = stride_of(g, axis);
    if (dir > 0) return (coord + 1 == g.n) ? idx - s * (g.n - 1) : idx + s;
    return (coord == 0) ? idx + s * (g.n - 1) : idx - s;
}

// Entrywise Laplacian over K scalar lanes per point; dst must not alias src.
template <int K>
void laplacian_kernel(const Grid& g, const MetricField& m, const double* src, double* dst) {
    const double ih2 = 1.0 / (g.h * g.h);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Neighbors nb = neighbors_of(g, idx);
        const double* ctr = src + K * idx;
        double* out = dst + K * idx;
        if (m.is_identity) {
            for (int k = 0; k < K; ++k) {
                double acc = -8.0 * ctr[k];
                for (int a = 0; a < 4; ++a) acc += src[K * nb.up[a] + k] + src[K * nb.dn[a] + k];
                out[k] = acc * ih2;
            }
            return;
        }
        for (int k = 0; k < K; ++k) {
            double acc = 0.0;
            for (int a = 0; a < 4; ++a)
                acc += m.g_inv(a, a) * (src[K * nb.up[a] + k] - 2.0 * ctr[k] + src[K * nb.dn[a] + k]);
            out[k] = acc * ih2;
        }
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                const double coef = 2.0 * m.g_inv(a, b) * 0.25 * ih2;
                if (coef == 0.0) continue;
                const std::size_t pp = step_axis(g, nb.up[a], nb.c[b], b, +1);
                const std::size_t pm = step_axis(g, nb.up[a], nb.c[b], b, -1);
                const std::size_t mp = step_axis(g, nb.dn[a], nb.c[b], b, +1);
                const std::size_t mm = step_axis(g, nb.dn[a], nb.c[b], b, -1);
                for (int k = 0; k < K; ++k)
                    out[k] += coef * (src[K * pp + k] - src[K * pm + k] - src[K * mp + k] + src[K * mm + k]);
            }
        }
    });
}

// Signed entry of a stored 3-form for arbitrary distinct indices.
inline double three_form_entry(const ThreeFormField& f, std::size_t idx, int a, int b, int c) {
    if (a == b || a == c || b == c) return 0.0;
    int s[3] = {a, b, c};
    double sign = 1.0;
    if (s[0] > s[1]) { std::swap(s[0], s[1]); sign = -sign; }
    if (s[1] > s[2]) { std::swap(s[1], s[2]); sign = -sign; }
    if (s[0] > s[1]) { std::swap(s[0], s[1]); sign = -sign; }
    int comp = -1;
    for (int k = 0; k < 4; ++k)
        if (ThreeFormField::tri_a[k] == s[0] && ThreeFormField::tri_b[k] == s[1] &&
            ThreeFormField::tri_c[k] == s[2]) comp = k;
    return sign * f.at(idx, comp);
}

}  // namespace

Mat4 diff2(const EndoField& f, const Grid& g, std::size_t idx, int p, int q) {
    const double ih2 = 1.0 / (g.h * g.h);
    if (p == q) {
        Mat4 r = f[g.shift(idx, p, +1)] - 2.0 * f[idx] + f[g.shift(idx, p, -1)];
        return r *= ih2;
    }
    const std::size_t up = g.shift(idx, p, +1), dn = g.shift(idx, p, -1);
    Mat4 r = f[g.shift(up, q, +1)] - f[g.shift(up, q, -1)] - f[g.shift(dn, q, +1)] +
             f[g.shift(dn, q, -1)];
    return r *= 0.25 * ih2;
}

DerivField covariant_derivative(const EndoField& field, const MetricField&) {
    const Grid& g = field.grid;
    DerivField out(g);
    const double ih = 0.5 / g.h;
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Neighbors nb = neighbors_of(g, idx);
        for (int p = 0; p < 4; ++p) {
            Mat4 d = field[nb.up[p]] - field[nb.dn[p]];
            out.at(idx, p) = d *= ih;
        }
    });
    return out;
}

EndoField rough_laplacian(const EndoField& field, const MetricField& metric) {
    EndoField out(field.grid);
    laplacian_kernel<16>(field.grid, metric, field.data.data()->a.data(), out.data.data()->a.data());
    return out;
}

TwoFormField rough_laplacian(const TwoFormField& omega, const MetricField& metric) {
    TwoFormField out(omega.grid);
    laplacian_kernel<6>(omega.grid, metric, omega.data.data(), out.data.data());
    return out;
}

EndoField bi_laplacian(const EndoField& field, const MetricField& metric) {
    EndoField mid = rough_laplacian(field, metric);
    return rough_laplacian(mid, metric);
}

HodgeOps hodge_operators(const TwoFormField& omega, const MetricField& metric) {
    if (!metric.is_identity)
        throw Error("hodge_operators: only the Euclidean metric is supported");
    const Grid& g = omega.grid;
    const double ih = 1.0 / g.h;
    HodgeOps ops{ThreeFormField(g), OneFormField(g), TwoFormField(g)};

    // d omega by forward differences, (d w)_abc = D+_a w_bc - D+_b w_ac + D+_c w_ab.
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Neighbors nb = neighbors_of(g, idx);
        for (int k = 0; k < 4; ++k) {
            const int a = ThreeFormField::tri_a[k];
            const int b = ThreeFormField::tri_b[k];
            const int c = ThreeFormField::tri_c[k];
            const double da = (omega.at(nb.up[a], TwoFormField::comp(b, c)) -
                               omega.at(idx, TwoFormField::comp(b, c))) * ih;
            const double db = (omega.at(nb.up[b], TwoFormField::comp(a, c)) -
                               omega.at(idx, TwoFormField::comp(a, c))) * ih;
            const double dc = (omega.at(nb.up[c], TwoFormField::comp(a, b)) -
                               omega.at(idx, TwoFormField::comp(a, b))) * ih;
            ops.d_omega.at(idx, k) = da - db + dc;
        }
    });

    // d* omega by backward differences (adjoint of d), (d* w)_b = -sum_a D-_a w_ab.
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Neighbors nb = neighbors_of(g, idx);
        for (int b = 0; b < 4; ++b) {
            double acc = 0.0;
            for (int a = 0; a < 4; ++a) {
                if (a == b) continue;
                acc -= (omega.entry(idx, a, b) - omega.entry(nb.dn[a], a, b)) * ih;
            }
            ops.dstar_omega.at(idx, b) = acc;
        }
    });

    // Hodge Laplacian (d d* + d* d) omega.
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Neighbors nb = neighbors_of(g, idx);
        for (int k = 0; k < 6; ++k) {
            const int a = TwoFormField::pair_a[k];
            const int b = TwoFormField::pair_b[k];
            double v = (ops.dstar_omega.at(nb.up[a], b) - ops.dstar_omega.at(idx, b)) * ih -
                       (ops.dstar_omega.at(nb.up[b], a) - ops.dstar_omega.at(idx, a)) * ih;
            for (int p = 0; p < 4; ++p) {
                if (p == a || p == b) continue;
                v -= (three_form_entry(ops.d_omega, idx, p, a, b) -
                      three_form_entry(ops.d_omega, nb.dn[p], p, a, b)) * ih;
            }
            ops.delta_d_omega.at(idx, k) = v;
        }
    });
    return ops;
}

ScalarField grad_norm_sq(const EndoField& field, const MetricField& metric) {
    const Grid& g = field.grid;
    ScalarField out(g);
    const double ih = 0.5 / g.h;
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Neighbors nb = neighbors_of(g, idx);
        Mat4 d[4];
        for (int p = 0; p < 4; ++p) {
            d[p] = field[nb.up[p]] - field[nb.dn[p]];
            d[p] *= ih;
        }
        double acc = 0.0;
        if (metric.is_identity) {
            for (int p = 0; p < 4; ++p) acc += frob_sq(d[p]);
        } else {
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) {
                    const double c = metric.g_inv(p, q);
                    if (c != 0.0) acc += c * metric.endo_inner(d[p], d[q]);
                }
        }
        out[idx] = acc;
    });
    return out;
}

ScalarField hessian_norm_sq(const EndoField& field, const MetricField& metric) {
    const Grid& g = field.grid;
    ScalarField out(g);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        Mat4 d2[4][4];
        for (int p = 0; p < 4; ++p)
            for (int q = p; q < 4; ++q) {
                d2[p][q] = diff2(field, g, idx, p, q);
                if (q != p) d2[q][p] = d2[p][q];
            }
        double acc = 0.0;
        if (metric.is_identity) {
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) acc += frob_sq(d2[p][q]);
        } else {
            for (int p = 0; p < 4; ++p)
                for (int r = 0; r < 4; ++r) {
                    double partial = 0.0;
                    for (int q = 0; q < 4; ++q)
                        for (int s = 0; s < 4; ++s) {
                            const double c = metric.g_inv(p, r) * metric.g_inv(q, s);
                            if (c != 0.0) partial += c * metric.endo_inner(d2[p][q], d2[r][s]);
                        }
                    acc += partial;
                }
        }
        out[idx] = acc;
    });
    return out;
}

double integrate(const ScalarField& f, const MetricField& metric) {
    const double h = f.grid.h;
    const double cell = metric.sqrt_det * h * h * h * h;
    return pairwise_sum(f.data) * cell;
}

double l2_inner(const EndoField& a, const EndoField& b, const MetricField& metric) {
    require_same_grid(a.grid, b.grid, "l2_inner");
    ScalarField prod(a.grid);
    parallel_for(0, a.grid.npts, [&](std::size_t idx) {
        prod[idx] = metric.endo_inner(a[idx], b[idx]);
    });
    return integrate(prod, metric);
}

double l2_norm(const EndoField& a, const MetricField& metric) {
    return std::sqrt(std::max(0.0, l2_inner(a, a, metric)));
}

TwoFormField omega_from_j(const EndoField& j, const MetricField& metric) {
    TwoFormField w(j.grid);
    parallel_for(0, j.grid.npts, [&](std::size_t idx) {
        const Mat4 full = metric.is_identity ? transpose(j[idx]) : transpose(j[idx]) * metric.g;
        for (int k = 0; k < 6; ++k) {
            const int a = TwoFormField::pair_a[k];
            const int b = TwoFormField::pair_b[k];
            w.at(idx, k) = 0.5 * (full(a, b) - full(b, a));
        }
    });
    return w;
}

double form_l2_sq(const OneFormField& a, const MetricField& metric) {
    ScalarField s(a.grid);
    parallel_for(0, a.grid.npts, [&](std::size_t idx) {
        double acc = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q) {
                const double c = metric.g_inv(p, q);
                if (c != 0.0) acc += c * a.at(idx, p) * a.at(idx, q);
            }
        s[idx] = acc;
    });
    return integrate(s, metric);
}

double form_l2_sq(const TwoFormField& a, const MetricField& metric) {
    ScalarField s(a.grid);
    parallel_for(0, a.grid.npts, [&](std::size_t idx) {
        double acc = 0.0;
        if (metric.is_identity) {
            for (int k = 0; k < 6; ++k) {
                const double v = a.at(idx, k);
                acc += 2.0 * v * v;
            }
        } else {
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) {
                    if (p == q) continue;
                    for (int r = 0; r < 4; ++r)
                        for (int t = 0; t < 4; ++t) {
                            if (r == t) continue;
                            const double c = metric.g_inv(p, r) * metric.g_inv(q, t);
                            if (c != 0.0) acc += c * a.entry(idx, p, q) * a.entry(idx, r, t);
                        }
                }
        }
        s[idx] = acc;
    });
    return integrate(s, metric);
}

double form_l2_sq(const ThreeFormField& a, const MetricField& metric) {
    if (!metric.is_identity)
        throw Error("form_l2_sq: 3-form norm implemented for the Euclidean metric only");
    ScalarField s(a.grid);
    parallel_for(0, a.grid.npts, [&](std::size_t idx) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double v = a.at(idx, k);
            acc += 6.0 * v * v;
        }
        s[idx] = acc;
    });
    return integrate(s, metric);
}

}  // namespace bhacs
