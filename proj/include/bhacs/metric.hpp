#pragma once

#include "bhacs/mat4.hpp"

namespace bhacs {

// Constant (translation-invariant) Riemannian metric on the torus. All
// Christoffel symbols vanish, so covariant derivatives reduce to coordinate
// derivatives; the metric enters through adjoints, norms and the volume form.
struct MetricField {
    Mat4 g = Mat4::identity();
    Mat4 g_inv = Mat4::identity();
    Mat4 g_sqrt = Mat4::identity();
    Mat4 g_inv_sqrt = Mat4::identity();
    double det_g = 1.0;
    double sqrt_det = 1.0;
    bool is_identity = true;

    static MetricField flat() { return MetricField{}; }

    static MetricField constant(const Mat4& g_in) {
        const Mat4 sym_err = g_in - transpose(g_in);
        if (max_abs(sym_err) > 1e-12) throw Error("MetricField: metric must be symmetric");
        if (min_sym_eigenvalue(g_in) < 0.1)
            throw Error("MetricField: metric eigenvalues must be >= 0.1");
        MetricField m;
        m.g = g_in;
        m.g_inv = inverse(g_in);
        m.g_sqrt = sqrt_spd(g_in);
        m.g_inv_sqrt = inv_sqrt_spd(g_in, 0.1);
        m.det_g = det(g_in);
        m.sqrt_det = std::sqrt(m.det_g);
        m.is_identity = max_abs(g_in - Mat4::identity()) == 0.0;
        return m;
    }

    // Metric adjoint A* = g^{-1} A^T g.
    Mat4 adjoint(const Mat4& a) const {
        if (is_identity) return transpose(a);
        return g_inv * transpose(a) * g;
    }

    // Pointwise endomorphism inner product <A,B> = tr(A* B).
    double endo_inner(const Mat4& a, const Mat4& b) const {
        if (is_identity) return frob_inner(a, b);
        return trace(adjoint(a) * b);
    }

    double endo_norm_sq(const Mat4& a) const { return endo_inner(a, a); }
};

}  // namespace bhacs
