#pragma once

#include <vector>

#include "bhacs/grid.hpp"
#include "bhacs/mat4.hpp"

namespace bhacs {

// Endomorphism-valued field: one Mat4 per grid point.
struct EndoField {
    Grid grid;
    std::vector<Mat4> data;

    EndoField() = default;
    explicit EndoField(const Grid& g) : grid(g), data(g.npts) {}

    Mat4& operator[](std::size_t i) { return data[i]; }
    const Mat4& operator[](std::size_t i) const { return data[i]; }
};

struct ScalarField {
    Grid grid;
    std::vector<double> data;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), data(g.npts, 0.0) {}

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
};

// Rank-3 field: four Mat4 per point (one per derivative axis), stored
// contiguously as data[4*idx + p].
struct DerivField {
    Grid grid;
    std::vector<Mat4> data;

    DerivField() = default;
    explicit DerivField(const Grid& g) : grid(g), data(4 * g.npts) {}

    Mat4& at(std::size_t idx, int p) { return data[4 * idx + p]; }
    const Mat4& at(std::size_t idx, int p) const { return data[4 * idx + p]; }
};

struct OneFormField {
    Grid grid;
    std::vector<double> data;  // data[4*idx + p] = alpha_p

    OneFormField() = default;
    explicit OneFormField(const Grid& g) : grid(g), data(4 * g.npts, 0.0) {}

    double& at(std::size_t idx, int p) { return data[4 * idx + p]; }
    double at(std::size_t idx, int p) const { return data[4 * idx + p]; }
};

// Antisymmetric 2-form field storing the six independent components in the
// fixed pair order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
struct TwoFormField {
    Grid grid;
    std::vector<double> data;  // data[6*idx + c]

    static constexpr int pair_a[6] = {0, 0, 0, 1, 1, 2};
    static constexpr int pair_b[6] = {1, 2, 3, 2, 3, 3};

    TwoFormField() = default;
    explicit TwoFormField(const Grid& g) : grid(g), data(6 * g.npts, 0.0) {}

    double& at(std::size_t idx, int c) { return data[6 * idx + c]; }
    double at(std::size_t idx, int c) const { return data[6 * idx + c]; }

    // Component index for ordered pair (a,b), a < b.
    static int comp(int a, int b) {
        static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
        return table[a][b];
    }

    // Signed entry omega_ab for any a != b.
    double entry(std::size_t idx, int a, int b) const {
        if (a == b) return 0.0;
        const int c = comp(a < b ? a : b, a < b ? b : a);
        return (a < b) ? at(idx, c) : -at(idx, c);
    }
};

// Antisymmetric 3-form field, triple order (0,1,2),(0,1,3),(0,2,3),(1,2,3).
struct ThreeFormField {
    Grid grid;
    std::vector<double> data;  // data[4*idx + c]

    static constexpr int tri_a[4] = {0, 0, 0, 1};
    static constexpr int tri_b[4] = {1, 1, 2, 2};
    static constexpr int tri_c[4] = {2, 3, 3, 3};

    ThreeFormField() = default;
    explicit ThreeFormField(const Grid& g) : grid(g), data(4 * g.npts, 0.0) {}

    double& at(std::size_t idx, int c) { return data[4 * idx + c]; }
    double at(std::size_t idx, int c) const { return data[4 * idx + c]; }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (a != b) throw Error(std::string(where) + ": grid mismatch");
}

}  // namespace bhacs
