#pragma once

#include <array>
#include <cmath>

#include "bhacs/common.hpp"

namespace bhacs {

// Dense real 4x4 matrix, row-major. Small value type used once per grid point,
// so everything lives in headers and is kept allocation-free.
struct Mat4 {
    std::array<double, 16> a{};

    double& operator()(int r, int c) { return a[4 * r + c]; }
    double operator()(int r, int c) const { return a[4 * r + c]; }

    static Mat4 zero() { return Mat4{}; }

    static Mat4 identity() {
        Mat4 m;
        m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = 1.0;
        return m;
    }

    Mat4& operator+=(const Mat4& o) {
        for (int i = 0; i < 16; ++i) a[i] += o.a[i];
        return *this;
    }
    Mat4& operator-=(const Mat4& o) {
        for (int i = 0; i < 16; ++i) a[i] -= o.a[i];
        return *this;
    }
    Mat4& operator*=(double s) {
        for (int i = 0; i < 16; ++i) a[i] *= s;
        return *this;
    }
};

inline Mat4 operator+(Mat4 x, const Mat4& y) { return x += y; }
inline Mat4 operator-(Mat4 x, const Mat4& y) { return x -= y; }
inline Mat4 operator*(Mat4 x, double s) { return x *= s; }
inline Mat4 operator*(double s, Mat4 x) { return x *= s; }
inline Mat4 operator-(const Mat4& x) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.a[i] = -x.a[i];
    return r;
}

inline Mat4 operator*(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 4; ++i) {
        const double xi0 = x(i, 0), xi1 = x(i, 1), xi2 = x(i, 2), xi3 = x(i, 3);
        for (int j = 0; j < 4; ++j)
            r(i, j) = xi0 * y(0, j) + xi1 * y(1, j) + xi2 * y(2, j) + xi3 * y(3, j);
    }
    return r;
}

inline Mat4 transpose(const Mat4& x) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = x(j, i);
    return r;
}

inline double trace(const Mat4& x) { return x(0, 0) + x(1, 1) + x(2, 2) + x(3, 3); }

// Frobenius inner product sum_ij x_ij y_ij.
inline double frob_inner(const Mat4& x, const Mat4& y) {
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += x.a[i] * y.a[i];
    return s;
}

inline double frob_sq(const Mat4& x) { return frob_inner(x, x); }
inline double frob_norm(const Mat4& x) { return std::sqrt(frob_sq(x)); }

inline double max_abs(const Mat4& x) {
    double m = 0.0;
    for (int i = 0; i < 16; ++i) m = std::max(m, std::abs(x.a[i]));
    return m;
}

inline double det(const Mat4& m) {
    const auto& a = m.a;
    const double s0 = a[0] * a[5] - a[1] * a[4];
    const double s1 = a[0] * a[6] - a[2] * a[4];
    const double s2 = a[0] * a[7] - a[3] * a[4];
    const double s3 = a[1] * a[6] - a[2] * a[5];
    const double s4 = a[1] * a[7] - a[3] * a[5];
    const double s5 = a[2] * a[7] - a[3] * a[6];
    const double c5 = a[10] * a[15] - a[11] * a[14];
    const double c4 = a[9] * a[15] - a[11] * a[13];
    const double c3 = a[9] * a[14] - a[10] * a[13];
    const double c2 = a[8] * a[15] - a[11] * a[12];
    const double c1 = a[8] * a[14] - a[10] * a[12];
    const double c0 = a[8] * a[13] - a[9] * a[12];
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

// Adjugate-based inverse. Throws on (near-)singular input; callers that need a
// guaranteed margin must check their own preconditions first.
inline Mat4 inverse(const Mat4& m) {
    const auto& a = m.a;
    const double s0 = a[0] * a[5] - a[1] * a[4];
    const double s1 = a[0] * a[6] - a[2] * a[4];
    const double s2 = a[0] * a[7] - a[3] * a[4];
    const double s3 = a[1] * a[6] - a[2] * a[5];
    const double s4 = a[1] * a[7] - a[3] * a[5];
    const double s5 = a[2] * a[7] - a[3] * a[6];
    const double c5 = a[10] * a[15] - a[11] * a[14];
    const double c4 = a[9] * a[15] - a[11] * a[13];
    const double c3 = a[9] * a[14] - a[10] * a[13];
    const double c2 = a[8] * a[15] - a[11] * a[12];
    const double c1 = a[8] * a[14] - a[10] * a[12];
    const double c0 = a[8] * a[13] - a[9] * a[12];
    const double d = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
    if (!(std::abs(d) > 1e-300)) throw Error("Mat4 inverse: singular matrix");
    const double inv = 1.0 / d;
    Mat4 r;
    r.a[0] = (a[5] * c5 - a[6] * c4 + a[7] * c3) * inv;
    r.a[1] = (-a[1] * c5 + a[2] * c4 - a[3] * c3) * inv;
    r.a[2] = (a[13] * s5 - a[14] * s4 + a[15] * s3) * inv;
    r.a[3] = (-a[9] * s5 + a[10] * s4 - a[11] * s3) * inv;
    r.a[4] = (-a[4] * c5 + a[6] * c2 - a[7] * c1) * inv;
    r.a[5] = (a[0] * c5 - a[2] * c2 + a[3] * c1) * inv;
    r.a[6] = (-a[12] * s5 + a[14] * s2 - a[15] * s1) * inv;
    r.a[7] = (a[8] * s5 - a[10] * s2 + a[11] * s1) * inv;
    r.a[8] = (a[4] * c4 - a[5] * c2 + a[7] * c0) * inv;
    r.a[9] = (-a[0] * c4 + a[1] * c2 - a[3] * c0) * inv;
    r.a[10] = (a[12] * s4 - a[13] * s2 + a[15] * s0) * inv;
    r.a[11] = (-a[8] * s4 + a[9] * s2 - a[11] * s0) * inv;
    r.a[12] = (-a[4] * c3 + a[5] * c1 - a[6] * c0) * inv;
    r.a[13] = (a[0] * c3 - a[1] * c1 + a[2] * c0) * inv;
    r.a[14] = (-a[12] * s3 + a[13] * s1 - a[14] * s0) * inv;
    r.a[15] = (a[8] * s3 - a[9] * s1 + a[10] * s0) * inv;
    return r;
}

// Eigendecomposition of a symmetric 4x4 by cyclic Jacobi sweeps.
// On return S = V * diag(lam) * V^T with V orthogonal (columns = eigenvectors).
// Eigenvalues are not sorted.
inline void sym_eigen(const Mat4& s, Mat4& v, std::array<double, 4>& lam) {
    Mat4 d = s;
    v = Mat4::identity();
    const double scale = std::max(1e-300, frob_norm(s));
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += d(p, q) * d(p, q);
        if (std::sqrt(off) <= 1e-15 * scale) break;
        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                const double apq = d(p, q);
                if (apq == 0.0) continue;
                const double theta = (d(q, q) - d(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (int k = 0; k < 4; ++k) {
                    const double dkp = d(k, p), dkq = d(k, q);
                    d(k, p) = c * dkp - sn * dkq;
                    d(k, q) = sn * dkp + c * dkq;
                }
                for (int k = 0; k < 4; ++k) {
                    const double dpk = d(p, k), dqk = d(q, k);
                    d(p, k) = c * dpk - sn * dqk;
                    d(q, k) = sn * dpk + c * dqk;
                }
                for (int k = 0; k < 4; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    for (int i = 0; i < 4; ++i) lam[i] = d(i, i);
}

inline double min_sym_eigenvalue(const Mat4& s) {
    Mat4 v;
    std::array<double, 4> lam;
    sym_eigen(s, v, lam);
    double m = lam[0];
    for (int i = 1; i < 4; ++i) m = std::min(m, lam[i]);
    return m;
}

// Symmetric positive definite square root via eigendecomposition.
inline Mat4 sqrt_spd(const Mat4& s, double min_eig = 0.0) {
    Mat4 v;
    std::array<double, 4> lam;
    sym_eigen(s, v, lam);
    for (int i = 0; i < 4; ++i) {
        if (lam[i] < min_eig)
            throw Error("sqrt_spd: matrix not positive definite within tolerance");
    }
    Mat4 r = Mat4::zero();
    for (int i = 0; i < 4; ++i) {
        const double sq = std::sqrt(std::max(lam[i], 0.0));
        for (int r0 = 0; r0 < 4; ++r0)
            for (int c0 = 0; c0 < 4; ++c0) r(r0, c0) += sq * v(r0, i) * v(c0, i);
    }
    return r;
}

inline Mat4 inv_sqrt_spd(const Mat4& s, double min_eig) {
    Mat4 v;
    std::array<double, 4> lam;
    sym_eigen(s, v, lam);
    Mat4 r = Mat4::zero();
    for (int i = 0; i < 4; ++i) {
        if (!(lam[i] >= min_eig)) throw Error("inv_sqrt_spd: eigenvalue below floor");
        const double isq = 1.0 / std::sqrt(lam[i]);
        for (int r0 = 0; r0 < 4; ++r0)
            for (int c0 = 0; c0 < 4; ++c0) r(r0, c0) += isq * v(r0, i) * v(c0, i);
    }
    return r;
}

}  // namespace bhacs
