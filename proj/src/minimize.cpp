#include "bhacs/minimize.hpp"

#include <cmath>
#include <sstream>

#include "bhacs/parallel.hpp"
#include "bhacs/topology.hpp"

namespace bhacs {

const char* to_string(OptStatus s) {
    switch (s) {
        case OptStatus::Converged: return "converged";
        case OptStatus::MaxIters: return "max-iterations";
        case OptStatus::Stalled: return "stalled";
    }
    return "unknown";
}

namespace {

struct Eval {
    double e2 = 0.0;
    double e1 = 0.0;
    double grad_norm = 0.0;
    double comm = 0.0;
    TangentField grad;
};

Eval evaluate(const CompatibleJField& j, const MetricField& metric) {
    const Grid& g = j.J.grid;
    Eval ev;
    const EndoField lap = rough_laplacian(j.J, metric);
    const EndoField bilap = rough_laplacian(lap, metric);
    ScalarField xi(g);
    parallel_for(0, g.npts, [&](std::size_t idx) { xi[idx] = metric.endo_norm_sq(lap[idx]); });
    ev.e2 = integrate(xi, metric);
    ev.e1 = integrate(grad_norm_sq(j.J, metric), metric);
    ScalarField cbuf(g);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4& jj = j.J[idx];
        cbuf[idx] = metric.endo_norm_sq(bilap[idx] + jj * bilap[idx] * jj);
    });
    ev.comm = std::sqrt(std::max(0.0, integrate(cbuf, metric)));
    EndoField t(g);
    parallel_for(0, g.npts, [&](std::size_t idx) { t[idx] = -4.0 * (j.J[idx] * bilap[idx]); });
    ev.grad = tangent_project(j, t, metric);
    ev.grad_norm = l2_norm(ev.grad.S, metric);
    return ev;
}

double e2_of(const EndoField& f, const MetricField& metric) {
    const EndoField lap = rough_laplacian(f, metric);
    ScalarField xi(f.grid);
    parallel_for(0, f.grid.npts, [&](std::size_t idx) {
        xi[idx] = metric.endo_norm_sq(lap[idx]);
    });
    return integrate(xi, metric);
}

TangentField negate(const TangentField& g) {
    TangentField d;
    d.S = EndoField(g.S.grid);
    parallel_for(0, g.S.grid.npts, [&](std::size_t idx) { d.S[idx] = -g.S[idx]; });
    d.max_anti_violation = g.max_anti_violation;
    d.max_skew_violation = g.max_skew_violation;
    d.max_pointwise_norm = g.max_pointwise_norm;
    return d;
}

}  // namespace

MinimizeResult minimize(const CompatibleJField& j0, const MetricField& metric,
                        const OptimizerConfig& cfg, const IterCallback& on_iter,
                        const CheckpointCallback& on_checkpoint) {
    if (cfg.max_iters < 0) throw Error("minimize: max_iters must be >= 0");
    if (!(cfg.grad_tol > 0.0)) throw Error("minimize: grad_tol must be positive");
    if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0))
        throw Error("minimize: armijo_c must lie in (0,1)");
    if (!(cfg.armijo_shrink > 0.0 && cfg.armijo_shrink < 1.0))
        throw Error("minimize: armijo_shrink must lie in (0,1)");

    const Grid& grid = j0.J.grid;
    const double h4 = grid.h * grid.h * grid.h * grid.h;
    const double drift_tol = 1e-11;
    const double stall_step = 1e-14;

    MinimizeResult res{j0, OptStatus::MaxIters, {}};
    CompatibleJField& cur = res.j_final;
    Eval ev = evaluate(cur, metric);

    auto record = [&](int iter, double step) {
        TraceEntry te{iter, ev.e2, ev.e1, ev.grad_norm, step, ev.comm};
        res.trace.push_back(te);
        if (on_iter) on_iter(te, cur);
    };
    record(0, 0.0);

    if (ev.grad_norm <= cfg.grad_tol) {
        res.status = OptStatus::Converged;
        return res;
    }

    double tau_trial = (cfg.initial_step > 0.0) ? cfg.initial_step : h4;
    EndoField prev_grad;  // gradient at the previous accepted iterate
    double prev_tau = 0.0, prev_gnorm2 = 0.0;

    for (int it = 1; it <= cfg.max_iters; ++it) {
        if (prev_tau > 0.0) {
            // Barzilai-Borwein step 1: <s,s>/<s,y> with s = -tau g_old and
            // y = g_new - g_old; fall back to the last accepted step when the
            // curvature estimate is not positive.
            const double cross = l2_inner(prev_grad, ev.grad.S, metric);
            const double sy = prev_tau * (prev_gnorm2 - cross);
            tau_trial = (sy > 0.0) ? prev_tau * prev_tau * prev_gnorm2 / sy : prev_tau;
        }
        const TangentField dir = negate(ev.grad);
        if (dir.max_pointwise_norm > 0.0)
            tau_trial = std::min(tau_trial, 0.45 / dir.max_pointwise_norm);

        double tau = tau_trial;
        const double gnorm2 = ev.grad_norm * ev.grad_norm;
        bool accepted = false;
        CompatibleJField cand;
        double e2_new = 0.0;
        while (tau >= stall_step) {
            cand = retract_cayley(cur, dir, tau, metric);
            e2_new = e2_of(cand.J, metric);
            if (e2_new <= ev.e2 - cfg.armijo_c * tau * gnorm2) {
                accepted = true;
                break;
            }
            tau *= cfg.armijo_shrink;
        }
        if (!accepted) {
            res.status = OptStatus::Stalled;
            return res;
        }

        if (cand.max_sq_violation > drift_tol || cand.max_skew_violation > drift_tol)
            cand = project_polar(cand.J, metric);

        prev_grad = std::move(ev.grad.S);
        prev_tau = tau;
        prev_gnorm2 = gnorm2;
        cur = std::move(cand);
        ev = evaluate(cur, metric);
        record(it, tau);
        if (cfg.checkpoint_every > 0 && it % cfg.checkpoint_every == 0 && on_checkpoint)
            on_checkpoint(it, cur);
        if (ev.grad_norm <= cfg.grad_tol) {
            res.status = OptStatus::Converged;
            return res;
        }
        tau_trial = tau;
    }
    res.status = OptStatus::MaxIters;
    return res;
}

ConcentrationReport concentration_scan(const CompatibleJField& j, const MetricField& metric,
                                       const std::vector<double>& radii, double eps0,
                                       int stride) {
    const Grid& g = j.J.grid;
    if (radii.empty()) throw Error("concentration_scan: no radii given");
    double rmax = 0.0;
    for (double r : radii) {
        if (r < 2.0 * g.h)
            throw Error("concentration_scan: radius below grid resolution (need >= 2h)");
        if (r >= 0.5) throw Error("concentration_scan: radius must be < 1/2");
        rmax = std::max(rmax, r);
    }
    if (stride <= 0) stride = std::max(1, g.n / 8);

    ConcentrationReport rep;
    rep.radii = radii;

    ScalarField mu = hessian_norm_sq(j.J, metric);
    {
        const ScalarField gsq = grad_norm_sq(j.J, metric);
        parallel_for(0, g.npts, [&](std::size_t idx) { mu[idx] += gsq[idx] * gsq[idx]; });
    }

    const int kmax = static_cast<int>(std::floor(rmax / g.h));
    const double cell = metric.sqrt_det * g.h * g.h * g.h * g.h;
    for (int c0 = 0; c0 < g.n; c0 += stride)
        for (int c1 = 0; c1 < g.n; c1 += stride)
            for (int c2 = 0; c2 < g.n; c2 += stride)
                for (int c3 = 0; c3 < g.n; c3 += stride) {
                    std::vector<double> f(radii.size(), 0.0);
                    for (int d0 = -kmax; d0 <= kmax; ++d0)
                        for (int d1 = -kmax; d1 <= kmax; ++d1)
                            for (int d2 = -kmax; d2 <= kmax; ++d2)
                                for (int d3 = -kmax; d3 <= kmax; ++d3) {
                                    const double dist =
                                        g.h * std::sqrt(double(d0) * d0 + double(d1) * d1 +
                                                        double(d2) * d2 + double(d3) * d3);
                                    if (dist > rmax) continue;
                                    const double val =
                                        mu[g.index_wrapped(c0 + d0, c1 + d1, c2 + d2, c3 + d3)];
                                    for (std::size_t k = 0; k < radii.size(); ++k)
                                        if (dist <= radii[k]) f[k] += val;
                                }
                    for (double& x : f) x *= cell;
                    rep.centers.push_back({c0, c1, c2, c3});
                    rep.f_values.push_back(std::move(f));
                }
    for (std::size_t ci = 0; ci < rep.f_values.size(); ++ci)
        for (std::size_t ri = 0; ri < radii.size(); ++ri)
            if (rep.f_values[ci][ri] >= eps0)
                rep.flagged.push_back({ci, ri, rep.f_values[ci][ri]});
    return rep;
}

SequenceReport sequence_experiment(const std::vector<CompatibleJField>& seeds,
                                   const MetricField& metric, const OptimizerConfig& cfg) {
    if (seeds.empty()) throw Error("sequence_experiment: no seeds given");
    SequenceReport rep;
    std::vector<CompatibleJField> finals;
    finals.reserve(seeds.size());
    for (const CompatibleJField& seed : seeds) {
        if (metric.is_identity)
            rep.periods_start.push_back(chern_form(seed, metric).periods);
        else
            rep.periods_start.push_back({});
        MinimizeResult r = minimize(seed, metric, cfg);
        rep.statuses.push_back(r.status);
        rep.final_e2.push_back(r.trace.back().e2);
        rep.final_e1.push_back(r.trace.back().e1);
        if (metric.is_identity)
            rep.periods_end.push_back(chern_form(r.j_final, metric).periods);
        else
            rep.periods_end.push_back({});
        finals.push_back(std::move(r.j_final));
    }
    rep.w12_distance.assign(finals.size(), std::vector<double>(finals.size(), 0.0));
    for (std::size_t i = 0; i < finals.size(); ++i)
        for (std::size_t k = i + 1; k < finals.size(); ++k) {
            const double d = w12_distance(finals[i].J, finals[k].J, metric);
            rep.w12_distance[i][k] = rep.w12_distance[k][i] = d;
        }
    rep.empirical_inf = rep.final_e2.empty() ? 0.0 : rep.final_e2.front();
    for (double e : rep.final_e2) rep.empirical_inf = std::min(rep.empirical_inf, e);
    return rep;
}

}  // namespace bhacs
