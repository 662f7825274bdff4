#pragma once

#include <cstddef>
#include <cstdint>

#include "bhacs/common.hpp"

namespace bhacs {

// Uniform periodic grid on the unit 4-torus: n points per axis, spacing
// h = 1/n, lexicographic row-major addressing (axis 0 slowest).
struct Grid {
    int n = 0;
    double h = 0.0;
    std::size_t npts = 0;

    Grid() = default;

    explicit Grid(int n_) : n(n_) {
        if (n < 8) throw Error("Grid: need n >= 8");
        h = 1.0 / static_cast<double>(n);
        npts = static_cast<std::size_t>(n) * n * n * n;
    }

    bool operator==(const Grid& o) const { return n == o.n; }
    bool operator!=(const Grid& o) const { return n != o.n; }

    int wrap(int i) const {
        i %= n;
        return (i < 0) ? i + n : i;
    }

    std::size_t index(int i0, int i1, int i2, int i3) const {
        return ((static_cast<std::size_t>(i0) * n + i1) * n + i2) * n + i3;
    }

    std::size_t index_wrapped(int i0, int i1, int i2, int i3) const {
        return index(wrap(i0), wrap(i1), wrap(i2), wrap(i3));
    }

    void decode(std::size_t idx, int& i0, int& i1, int& i2, int& i3) const {
        i3 = static_cast<int>(idx % n);
        idx /= n;
        i2 = static_cast<int>(idx % n);
        idx /= n;
        i1 = static_cast<int>(idx % n);
        idx /= n;
        i0 = static_cast<int>(idx);
    }

    double coord(int i) const { return h * static_cast<double>(i); }

    // Neighbour of idx shifted by `step` grid units along axis p.
    std::size_t shift(std::size_t idx, int p, int step) const {
        int c[4];
        decode(idx, c[0], c[1], c[2], c[3]);
        c[p] = wrap(c[p] + step);
        return index(c[0], c[1], c[2], c[3]);
    }
};

// Shortest signed periodic displacement from a to b on the unit circle.
inline double periodic_delta(double a, double b) {
    double d = b - a;
    while (d > 0.5) d -= 1.0;
    while (d < -0.5) d += 1.0;
    return d;
}

}  // namespace bhacs
