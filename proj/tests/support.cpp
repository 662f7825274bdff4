#include "support.hpp"

#include <cmath>

namespace bhacs::test {

Mat4 db_sqrt(const Mat4& a, int iters) {
    Mat4 y = a;
    Mat4 z = Mat4::identity();
    for (int k = 0; k < iters; ++k) {
        const Mat4 yn = 0.5 * (y + inverse(z));
        const Mat4 zn = 0.5 * (z + inverse(y));
        const double change = max_abs(yn - y);
        y = yn;
        z = zn;
        if (change < 1e-16) break;
    }
    return y;
}

Mat4 binomial_sqrt(const Mat4& e, int terms) {
    // sqrt(id - e) = sum_l c_l e^l with c_0 = 1, c_{l+1} = c_l (l - 1/2)/(l + 1),
    // i.e. 1 - e/2 - e^2/8 - e^3/16 - ...
    Mat4 sum = Mat4::identity();
    Mat4 power = Mat4::identity();
    double coef = 1.0;
    for (int l = 1; l <= terms; ++l) {
        power = power * e;
        coef *= (static_cast<double>(l) - 1.5) / static_cast<double>(l);
        sum += coef * power;
    }
    return sum;
}

namespace {

// Index arithmetic written out longhand, independent of Grid::shift.
std::size_t flat_index(int n, int i0, int i1, int i2, int i3) {
    auto w = [n](int v) {
        v %= n;
        return v < 0 ? v + n : v;
    };
    return ((static_cast<std::size_t>(w(i0)) * n + w(i1)) * n + w(i2)) * n + w(i3);
}

double metric_norm_sq(const Mat4& x, const MetricField& m) {
    // tr(g^{-1} x^t g x) written as an explicit quadruple loop.
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    s += m.g_inv(i, j) * x(k, j) * m.g(k, l) * x(l, i);
    return s;
}

}  // namespace

double naive_e2(const EndoField& f, const MetricField& m) {
    const int n = f.grid.n;
    const double h = f.grid.h;
    double total = 0.0;
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) {
                    Mat4 lap = Mat4::zero();
                    const Mat4& ctr = f[flat_index(n, i0, i1, i2, i3)];
                    for (int p = 0; p < 4; ++p)
                        for (int q = 0; q < 4; ++q) {
                            const double c = m.g_inv(p, q);
                            if (c == 0.0) continue;
                            Mat4 dd;
                            if (p == q) {
                                const int up[4] = {i0 + (p == 0), i1 + (p == 1), i2 + (p == 2),
                                                   i3 + (p == 3)};
                                const int dn[4] = {i0 - (p == 0), i1 - (p == 1), i2 - (p == 2),
                                                   i3 - (p == 3)};
                                dd = f[flat_index(n, up[0], up[1], up[2], up[3])] +
                                     f[flat_index(n, dn[0], dn[1], dn[2], dn[3])] - 2.0 * ctr;
                                dd *= 1.0 / (h * h);
                            } else {
                                auto at = [&](int sp, int sq) {
                                    const int c0 = i0 + sp * (p == 0) + sq * (q == 0);
                                    const int c1 = i1 + sp * (p == 1) + sq * (q == 1);
                                    const int c2 = i2 + sp * (p == 2) + sq * (q == 2);
                                    const int c3 = i3 + sp * (p == 3) + sq * (q == 3);
                                    return f[flat_index(n, c0, c1, c2, c3)];
                                };
                                dd = at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1);
                                dd *= 0.25 / (h * h);
                            }
                            lap += c * dd;
                        }
                    total += metric_norm_sq(lap, m);
                }
    return total * m.sqrt_det * h * h * h * h;
}

double naive_e1(const EndoField& f, const MetricField& m) {
    const int n = f.grid.n;
    const double h = f.grid.h;
    double total = 0.0;
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) {
                    Mat4 d[4];
                    for (int p = 0; p < 4; ++p) {
                        const int up[4] = {i0 + (p == 0), i1 + (p == 1), i2 + (p == 2),
                                           i3 + (p == 3)};
                        const int dn[4] = {i0 - (p == 0), i1 - (p == 1), i2 - (p == 2),
                                           i3 - (p == 3)};
                        d[p] = f[flat_index(n, up[0], up[1], up[2], up[3])] -
                               f[flat_index(n, dn[0], dn[1], dn[2], dn[3])];
                        d[p] *= 0.5 / h;
                    }
                    for (int p = 0; p < 4; ++p)
                        for (int q = 0; q < 4; ++q) {
                            const double c = m.g_inv(p, q);
                            if (c == 0.0) continue;
                            for (int i = 0; i < 4; ++i)
                                for (int jj = 0; jj < 4; ++jj)
                                    for (int k = 0; k < 4; ++k)
                                        for (int l = 0; l < 4; ++l)
                                            total += c * m.g_inv(i, jj) * d[p](k, jj) *
                                                     m.g(k, l) * d[q](l, i);
                        }
                }
    return total * m.sqrt_det * h * h * h * h;
}

double fd_slope_e2(const CompatibleJField& j, const TangentField& s, const MetricField& m,
                   double t) {
    const CompatibleJField plus = retract_cayley(j, s, t, m);
    const CompatibleJField minus = retract_cayley(j, s, -t, m);
    const double ep = energy_e2(plus, m, false).e2;
    const double em = energy_e2(minus, m, false).e2;
    return (ep - em) / (2.0 * t);
}

std::array<double, 3> sphere_point(const Mat4& j) { return {j(1, 0), j(2, 0), j(3, 0)}; }

namespace {

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::array<double, 3> cross3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Signed solid angle of the spherical triangle (a, b, c).
double solid_angle(const std::array<double, 3>& a, const std::array<double, 3>& b,
                   const std::array<double, 3>& c) {
    const double num = dot3(a, cross3(b, c));
    const double den = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
    return 2.0 * std::atan2(num, den);
}

}  // namespace

double solid_angle_degree(const CompatibleJField& j, int a, int b,
                          const std::array<int, 4>& base) {
    const Grid& g = j.J.grid;
    auto n_at = [&](int ia, int ib) {
        std::array<int, 4> c = base;
        c[a] = ia;
        c[b] = ib;
        return sphere_point(j.J[g.index_wrapped(c[0], c[1], c[2], c[3])]);
    };
    double omega = 0.0;
    for (int ia = 0; ia < g.n; ++ia)
        for (int ib = 0; ib < g.n; ++ib) {
            const auto n00 = n_at(ia, ib);
            const auto n10 = n_at(ia + 1, ib);
            const auto n01 = n_at(ia, ib + 1);
            const auto n11 = n_at(ia + 1, ib + 1);
            omega += solid_angle(n00, n10, n11) + solid_angle(n00, n11, n01);
        }
    return omega / (4.0 * 3.141592653589793238462643383279502884);
}

}  // namespace bhacs::test
