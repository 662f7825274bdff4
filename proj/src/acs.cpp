#include "bhacs/acs.hpp"

#include <sstream>

#include "bhacs/parallel.hpp"

namespace bhacs {

namespace {

std::string point_label(const Grid& g, std::size_t idx) {
    int c[4];
    g.decode(idx, c[0], c[1], c[2], c[3]);
    std::ostringstream os;
    os << "(" << c[0] << "," << c[1] << "," << c[2] << "," << c[3] << ")";
    return os.str();
}

// Index of the largest value; ties resolved to the first occurrence.
std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

Mat4 skew_part(const Mat4& m, const MetricField& metric) {
    if (metric.is_identity) return 0.5 * (m - transpose(m));
    return 0.5 * (m - metric.g_inv * transpose(m) * metric.g);
}

}  // namespace

CompatibleJField validate(const EndoField& j, const MetricField& metric, double tol) {
    const Grid& g = j.grid;
    std::vector<double> sq(g.npts), skew(g.npts), quad(g.npts);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4& m = j[idx];
        sq[idx] = frob_norm(m * m + Mat4::identity());
        skew[idx] = frob_norm(metric.g * m + transpose(m) * metric.g);
        quad[idx] = frob_norm(transpose(m) * metric.g * m - metric.g);
    });
    const std::size_t wsq = argmax(sq), wskew = argmax(skew), wquad = argmax(quad);
    const double quad_tol = tol * (1.0 + frob_norm(metric.g));
    if (sq[wsq] > tol || skew[wskew] > tol || quad[wquad] > quad_tol) {
        std::ostringstream os;
        os << "validate: compatibility violation exceeds tol " << tol
           << "; worst ||J^2+id|| = " << sq[wsq] << " at " << point_label(g, wsq)
           << ", worst ||gJ+J^t g|| = " << skew[wskew] << " at " << point_label(g, wskew)
           << ", worst ||J^t g J - g|| = " << quad[wquad] << " at " << point_label(g, wquad);
        throw Error(os.str());
    }
    CompatibleJField out{j, sq[wsq], skew[wskew]};
    return out;
}

TangentField tangent_project(const CompatibleJField& j, const EndoField& t_field,
                             const MetricField& metric) {
    require_same_grid(j.J.grid, t_field.grid, "tangent_project");
    const Grid& g = t_field.grid;
    TangentField out;
    out.S = EndoField(g);
    std::vector<double> anti(g.npts), skew(g.npts), norm(g.npts);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4& jj = j.J[idx];
        const Mat4 a = t_field[idx] + jj * t_field[idx] * jj;
        const Mat4 s = 0.25 * (a - (metric.is_identity
                                        ? transpose(a)
                                        : Mat4(metric.g_inv * transpose(a) * metric.g)));
        out.S[idx] = s;
        anti[idx] = frob_norm(jj * s + s * jj);
        skew[idx] = frob_norm(metric.g * s + transpose(s) * metric.g);
        norm[idx] = frob_norm(s);
    });
    out.max_anti_violation = anti[argmax(anti)];
    out.max_skew_violation = skew[argmax(skew)];
    out.max_pointwise_norm = norm[argmax(norm)];
    return out;
}

TangentField validate_tangent(const CompatibleJField& j, const EndoField& s,
                              const MetricField& metric, double tol) {
    require_same_grid(j.J.grid, s.grid, "validate_tangent");
    const Grid& g = s.grid;
    std::vector<double> anti(g.npts), skew(g.npts), norm(g.npts);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4& jj = j.J[idx];
        const Mat4& m = s[idx];
        anti[idx] = frob_norm(jj * m + m * jj);
        skew[idx] = frob_norm(metric.g * m + transpose(m) * metric.g);
        norm[idx] = frob_norm(m);
    });
    TangentField out;
    out.max_anti_violation = anti[argmax(anti)];
    out.max_skew_violation = skew[argmax(skew)];
    out.max_pointwise_norm = norm[argmax(norm)];
    const double scaled = tol * (1.0 + out.max_pointwise_norm);
    if (out.max_anti_violation > scaled || out.max_skew_violation > scaled) {
        std::ostringstream os;
        os << "validate_tangent: tangency violation; max ||JS+SJ|| = " << out.max_anti_violation
           << ", max ||gS+S^t g|| = " << out.max_skew_violation << ", allowed " << scaled;
        throw Error(os.str());
    }
    out.S = s;
    return out;
}

CompatibleJField retract_cayley(const CompatibleJField& j, const TangentField& s, double t,
                                const MetricField& metric) {
    require_same_grid(j.J.grid, s.S.grid, "retract_cayley");
    const double tangency_tol = 1e-8 * (1.0 + s.max_pointwise_norm);
    if (s.max_anti_violation > tangency_tol || s.max_skew_violation > tangency_tol) {
        std::ostringstream os;
        os << "retract_cayley: direction is not tangent (||JS+SJ|| = " << s.max_anti_violation
           << ", ||gS+S^t g|| = " << s.max_skew_violation << ", allowed " << tangency_tol << ")";
        throw Error(os.str());
    }
    const Grid& g = j.J.grid;
    EndoField out(g);
    std::vector<double> too_big(g.npts, 0.0);
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const Mat4 ts = t * s.S[idx];
        if (max_abs(ts) >= 0.5) {
            too_big[idx] = max_abs(ts);
            return;
        }
        const Mat4 c = Mat4::identity() - ts;
        out[idx] = c * j.J[idx] * inverse(c);
    });
    const std::size_t worst = argmax(too_big);
    if (too_big[worst] > 0.0) {
        std::ostringstream os;
        os << "retract_cayley: step too large, max |tS| entry = " << too_big[worst] << " at "
           << point_label(g, worst) << " (need < 0.5)";
        throw Error(os.str());
    }
    return validate(out, metric, 1e-9);
}

double polar_gate_value(const Mat4& m, const MetricField& metric) {
    const Mat4 a = skew_part(m, metric);
    Mat4 b = -1.0 * (a * a);
    if (!metric.is_identity) b = metric.g_sqrt * b * metric.g_inv_sqrt;
    return min_sym_eigenvalue(0.5 * (b + transpose(b)));
}

Mat4 project_polar_point(const Mat4& m, const MetricField& metric, double sigma_min) {
    const Mat4 a = skew_part(m, metric);
    Mat4 b = -1.0 * (a * a);
    if (!metric.is_identity) b = metric.g_sqrt * b * metric.g_inv_sqrt;
    b = 0.5 * (b + transpose(b));  // kill rounding asymmetry before Jacobi
    Mat4 v;
    std::array<double, 4> lam;
    sym_eigen(b, v, lam);
    for (double l : lam) {
        if (!(l >= sigma_min)) {
            std::ostringstream os;
            os << "project_polar: -A^2 eigenvalue " << l << " below sigma_min " << sigma_min;
            throw Error(os.str());
        }
    }
    Mat4 q_inv = Mat4::zero();
    for (int i = 0; i < 4; ++i) {
        const double isq = 1.0 / std::sqrt(lam[i]);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) q_inv(r, c) += isq * v(r, i) * v(c, i);
    }
    if (!metric.is_identity) q_inv = metric.g_inv_sqrt * q_inv * metric.g_sqrt;
    return q_inv * a;
}

CompatibleJField project_polar(const EndoField& m, const MetricField& metric, double sigma_min) {
    const Grid& g = m.grid;
    EndoField out(g);
    std::vector<double> bad(g.npts, 0.0);  // sigma_min deficit, 0 when fine
    parallel_for(0, g.npts, [&](std::size_t idx) {
        const double gate = polar_gate_value(m[idx], metric);
        if (gate < sigma_min) {
            bad[idx] = sigma_min - gate;
            return;
        }
        out[idx] = project_polar_point(m[idx], metric, sigma_min);
    });
    const std::size_t worst = argmax(bad);
    if (bad[worst] > 0.0) {
        std::ostringstream os;
        os << "project_polar: degenerate projection, smallest eigenvalue of -A^2 is "
           << (sigma_min - bad[worst]) << " < sigma_min " << sigma_min << " at "
           << point_label(g, worst);
        throw Error(os.str());
    }
    return validate(out, metric, 1e-9);
}

}  // namespace bhacs
