#include "bhacs/energy.hpp"

#include "bhacs/parallel.hpp"
#include "bhacs/seeds.hpp"

namespace bhacs {

namespace {

// g^{pq}-contracted product sum_pq g^{pq} dJ_p dK_q of two per-point
// derivative stacks.
Mat4 contracted_product(const Mat4 dj[4], const Mat4 dk[4], const MetricField& m) {
    Mat4 acc = Mat4::zero();
    if (m.is_identity) {
        for (int p = 0; p < 4; ++p) acc += dj[p] * dk[p];
        return acc;
    }
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
            const double c = m.g_inv(p, q);
            if (c != 0.0) acc += c * (dj[p] * dk[q]);
        }
    return acc;
}

void centered_stack(const EndoField& f, const Grid& g, std::size_t idx, Mat4 out[4]) {
    const double ih = 0.5 / g.h;
    for (int p = 0; p < 4; ++p) {
        out[p] = f[g.shift(idx, p, +1)] - f[g.shift(idx, p, -1)];
        out[p] *= ih;
    }
}

}  // namespace

EnergyReport energy_e2(const CompatibleJField& j, const MetricField& metric,
                       bool with_densities) {
    const Grid& g = j.J.grid;
    EnergyReport rep;
    const EndoField lap = rough_laplacian(j.J, metric);
    ScalarField xi(g);
    parallel_for(0, g.npts, [&](std::size_t idx) { xi[idx] = metric.endo_norm_sq(lap[idx]); });
    rep.e2 = integrate(xi, metric);
    ScalarField gsq = grad_norm_sq(j.J, metric);
    rep.e1 = integrate(gsq, metric);
    if (with_densities) {
        ScalarField mu = hessian_norm_sq(j.J, metric);
        parallel_for(0, g.npts, [&](std::size_t idx) { mu[idx] += gsq[idx] * gsq[idx]; });
        rep.density_mu = std::move(mu);
        rep.density_xi = std::move(xi);
    }
    return rep;
}

TangentField gradient_e2(const CompatibleJField& j, const MetricField& metric) {
    const Grid& g = j.J.grid;
    const EndoField bilap = bi_laplacian(j.J, metric);
    EndoField t(g);
    parallel_for(0, g.npts, [&](std::size_t idx) { t[idx] = -4.0 * (j.J[idx] * bilap[idx]); });
    return tangent_project(j, t, metric);
}

double residual_commutator(const CompatibleJField& j, const MetricField& metric) {
    const Grid& g = j.J.grid;
    const EndoField bilap = bi_laplacian(j.J, metric);
    ScalarField r(g);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4& jj = j.J[idx];
        r[idx] = metric.endo_norm_sq(bilap[idx] + jj * bilap[idx] * jj);
    });
    return std::sqrt(std::max(0.0, integrate(r, metric)));
}

double residual_strong(const CompatibleJField& j, const MetricField& metric) {
    const Grid& g = j.J.grid;
    const EndoField lap = rough_laplacian(j.J, metric);
    const EndoField bilap = rough_laplacian(lap, metric);
    EndoField prod(g);  // g^{pq} grad_p J grad_q J
    parallel_for(0, g.npts, [&](std::size_t idx) {
        Mat4 dj[4];
        centered_stack(j.J, g, idx, dj);
        prod[idx] = contracted_product(dj, dj, metric);
    });
    const EndoField lap_prod = rough_laplacian(prod, metric);
    ScalarField r(g);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4& jj = j.J[idx];
        Mat4 dj[4], dl[4];
        centered_stack(j.J, g, idx, dj);
        centered_stack(lap, g, idx, dl);
        const Mat4 q = jj * (lap[idx] * lap[idx]) + jj * contracted_product(dj, dl, metric) +
                       jj * contracted_product(dl, dj, metric) + jj * lap_prod[idx];
        r[idx] = metric.endo_norm_sq(bilap[idx] - q);
    });
    return std::sqrt(std::max(0.0, integrate(r, metric)));
}

double w22_norm(const EndoField& t, const MetricField& metric) {
    const Grid& g = t.grid;
    ScalarField gsq = grad_norm_sq(t, metric);
    ScalarField hsq = hessian_norm_sq(t, metric);
    ScalarField s(g);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        s[idx] = metric.endo_norm_sq(t[idx]) + gsq[idx] + hsq[idx];
    });
    return std::sqrt(std::max(0.0, integrate(s, metric)));
}

double w12_distance(const EndoField& a, const EndoField& b, const MetricField& metric) {
    require_same_grid(a.grid, b.grid, "w12_distance");
    EndoField diff(a.grid);
    parallel_for(0, a.grid.npts, [&](std::size_t idx) { diff[idx] = a[idx] - b[idx]; });
    ScalarField gsq = grad_norm_sq(diff, metric);
    ScalarField s(a.grid);
    parallel_for(0, a.grid.npts, [&](std::size_t idx) {
        s[idx] = metric.endo_norm_sq(diff[idx]) + gsq[idx];
    });
    return std::sqrt(std::max(0.0, integrate(s, metric)));
}

namespace {

double weak_residual_one(const CompatibleJField& j, const EndoField& lap,
                         const EndoField& t_field, const MetricField& metric) {
    const Grid& g = j.J.grid;
    const EndoField lap_t = rough_laplacian(t_field, metric);
    ScalarField s(g);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4& jj = j.J[idx];
        Mat4 dj[4], dt[4];
        centered_stack(j.J, g, idx, dj);
        centered_stack(t_field, g, idx, dt);
        const Mat4 comm = lap_t[idx] * jj - jj * lap_t[idx];
        const Mat4 cross = contracted_product(dt, dj, metric) - contracted_product(dj, dt, metric);
        s[idx] = metric.endo_inner(lap[idx], comm) + 2.0 * metric.endo_inner(lap[idx], cross);
    });
    const double value = integrate(s, metric);
    const double norm = w22_norm(t_field, metric);
    return std::abs(value) / std::max(norm, 1e-300);
}

double el1_residual_one(const CompatibleJField& j, const EndoField& lap,
                        const EndoField& t_field, const MetricField& metric) {
    const Grid& g = j.J.grid;
    const EndoField lap_t = rough_laplacian(t_field, metric);
    ScalarField s(g);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4& jj = j.J[idx];
        const Mat4& lp = lap[idx];
        Mat4 dj[4], dt[4];
        centered_stack(j.J, g, idx, dj);
        centered_stack(t_field, g, idx, dt);
        const Mat4 prod = contracted_product(dj, dj, metric);
        const Mat4 head = lp - jj * prod;
        Mat4 a = jj * (lp * lp) + prod * lp - lp * prod;
        if (metric.is_identity) {
            for (int p = 0; p < 4; ++p) a += dj[p] * lp * dj[p];
        } else {
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) {
                    const double c = metric.g_inv(p, q);
                    if (c != 0.0) a += c * (dj[p] * lp * dj[q]);
                }
        }
        double acc = metric.endo_inner(head, lap_t[idx]) + metric.endo_inner(a, t_field[idx]);
        for (int p = 0; p < 4; ++p) {
            const Mat4 b = dj[p] * lp * jj + jj * lp * dj[p];
            if (metric.is_identity) {
                acc += metric.endo_inner(b, dt[p]);
            } else {
                for (int q = 0; q < 4; ++q) {
                    const double c = metric.g_inv(p, q);
                    if (c != 0.0) acc += c * metric.endo_inner(b, dt[q]);
                }
            }
        }
        s[idx] = acc;
    });
    const double value = integrate(s, metric);
    const double norm = w22_norm(t_field, metric);
    return std::abs(value) / std::max(norm, 1e-300);
}

}  // namespace

double residual_weak(const CompatibleJField& j, const MetricField& metric,
                     const std::vector<EndoField>& tests) {
    if (tests.empty()) throw Error("residual_weak: empty test battery");
    const EndoField lap = rough_laplacian(j.J, metric);
    double worst = 0.0;
    for (const EndoField& t : tests) {
        require_same_grid(j.J.grid, t.grid, "residual_weak");
        worst = std::max(worst, weak_residual_one(j, lap, t, metric));
    }
    return worst;
}

double residual_weak_el1(const CompatibleJField& j, const MetricField& metric,
                         const std::vector<EndoField>& tests) {
    if (tests.empty()) throw Error("residual_weak_el1: empty test battery");
    const EndoField lap = rough_laplacian(j.J, metric);
    double worst = 0.0;
    for (const EndoField& t : tests) {
        require_same_grid(j.J.grid, t.grid, "residual_weak_el1");
        worst = std::max(worst, el1_residual_one(j, lap, t, metric));
    }
    return worst;
}

double residual_weak_streaming(const CompatibleJField& j, const MetricField& metric, int count,
                               std::uint64_t seed) {
    if (count < 1) throw Error("residual_weak_streaming: empty test battery");
    const EndoField lap = rough_laplacian(j.J, metric);
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const EndoField t = random_bandlimited_endo(j.J.grid, seed + i);
        worst = std::max(worst, weak_residual_one(j, lap, t, metric));
    }
    return worst;
}

double residual_weak_el1_streaming(const CompatibleJField& j, const MetricField& metric,
                                   int count, std::uint64_t seed) {
    if (count < 1) throw Error("residual_weak_el1_streaming: empty test battery");
    const EndoField lap = rough_laplacian(j.J, metric);
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const EndoField t = random_bandlimited_endo(j.J.grid, seed + i);
        worst = std::max(worst, el1_residual_one(j, lap, t, metric));
    }
    return worst;
}

std::vector<EndoField> make_test_battery(const Grid& grid, int count, std::uint64_t seed) {
    std::vector<EndoField> battery;
    battery.reserve(count);
    for (int i = 0; i < count; ++i) battery.push_back(random_bandlimited_endo(grid, seed + i));
    return battery;
}

double energy_symplectic(const CompatibleJField& j, const MetricField& metric) {
    const TwoFormField omega = omega_from_j(j.J, metric);
    const HodgeOps ops = hodge_operators(omega, metric);
    return form_l2_sq(ops.delta_d_omega, metric);
}

double symplectic_e1(const CompatibleJField& j, const MetricField& metric) {
    const TwoFormField omega = omega_from_j(j.J, metric);
    const HodgeOps ops = hodge_operators(omega, metric);
    return form_l2_sq(ops.d_omega, metric) + form_l2_sq(ops.dstar_omega, metric);
}

EnergyReport full_report(const CompatibleJField& j, const MetricField& metric, int battery_count,
                         std::uint64_t battery_seed) {
    EnergyReport rep = energy_e2(j, metric, true);
    rep.residual_commutator = residual_commutator(j, metric);
    rep.residual_strong = residual_strong(j, metric);
    rep.residual_weak_max = residual_weak_streaming(j, metric, battery_count, battery_seed);
    return rep;
}

}  // namespace bhacs
