#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bhacs/energy.hpp"
#include "bhacs/topology.hpp"
#include "bhacs/seeds.hpp"
#include "support.hpp"

using namespace bhacs;

TEST_CASE("constant structure carries identically zero chern form") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    const ChernForm c = chern_form(constant_seed(g, m), m);
    double worst = 0.0;
    for (double v : c.gamma.data) worst = std::max(worst, std::abs(v));
    CHECK(worst == 0.0);
    for (double p : c.periods) CHECK(p == 0.0);
}

TEST_CASE("chern form requires the euclidean metric") {
    const Grid g(8);
    Mat4 gm = Mat4::identity();
    gm(0, 0) = 2.0;
    const MetricField m = MetricField::constant(gm);
    const CompatibleJField j = constant_seed(g, m);
    CHECK_THROWS_AS(chern_form(j, m), Error);
}

TEST_CASE("stored two-form entries are antisymmetric through the accessor") {
    const Grid g(16);
    const MetricField m = MetricField::flat();
    const ChernForm c = chern_form(sphere_map_seed({1, 0, 0, 0, 0, 0}, g, m), m);
    for (std::size_t idx = 0; idx < g.npts; idx += 977) {
        for (int p = 0; p < 4; ++p) {
            CHECK(c.gamma.entry(idx, p, p) == 0.0);
            for (int q = 0; q < 4; ++q)
                CHECK(c.gamma.entry(idx, p, q) == -c.gamma.entry(idx, q, p));
        }
    }
}

TEST_CASE("sphere seeds reject unrealizable degree combinations") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    CHECK_THROWS_AS(sphere_map_seed({1, 1, 0, 0, 0, 0}, g, m), Error);
    CHECK_THROWS_AS(sphere_map_seed({0, 0, 2, 0, 0, 1}, g, m), Error);
}

TEST_CASE("all-zero degrees reproduce the constant seed bit for bit") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    const CompatibleJField a = sphere_map_seed({0, 0, 0, 0, 0, 0}, g, m);
    const CompatibleJField b = constant_seed(g, m);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < g.npts; ++idx)
        worst = std::max(worst, max_abs(a.J[idx] - b.J[idx]));
    CHECK(worst == 0.0);
}

TEST_CASE("sphere seed degree matches the solid angle oracle") {
    const Grid g(32);
    const MetricField m = MetricField::flat();
    const CompatibleJField j = sphere_map_seed({0, 1, 0, 0, 0, 0}, g, m);
    // Plane index 1 is the (x0, x2) plane.
    const double deg = test::solid_angle_degree(j, 0, 2, {0, 3, 0, 5});
    CHECK(deg == doctest::Approx(1.0).epsilon(1e-3));
    // Transverse slices are identical by construction.
    const double deg2 = test::solid_angle_degree(j, 0, 2, {0, 9, 0, 14});
    CHECK(deg == doctest::Approx(deg2).epsilon(1e-12));
}

TEST_CASE("degree one periods are integral at coarse and fine grids") {
    const MetricField m = MetricField::flat();
    {
        const Grid g(16);
        const ChernForm c = chern_form(sphere_map_seed({0, 0, 1, 0, 0, 0}, g, m), m);
        CHECK(std::abs(c.periods[2] - 1.0) < 6e-3);
        for (int other : {0, 1, 3, 4, 5}) CHECK(std::abs(c.periods[other]) < 1e-12);
    }
    {
        const Grid g(32);
        const ChernForm c = chern_form(sphere_map_seed({1, 0, 0, 0, 0, 0}, g, m), m);
        CHECK(std::abs(c.periods[0] - 1.0) < 1e-3);
        for (int other : {1, 2, 3, 4, 5}) CHECK(std::abs(c.periods[other]) < 1e-12);
    }
}

TEST_CASE("degree two periods are integral and additive") {
    const MetricField m = MetricField::flat();
    const Grid g(32);
    const double p1 =
        chern_form(sphere_map_seed({1, 0, 0, 0, 0, 0}, g, m), m).periods[0];
    const double p2 =
        chern_form(sphere_map_seed({2, 0, 0, 0, 0, 0}, g, m), m).periods[0];
    CHECK(std::abs(p2 - 2.0) < 1e-3);
    CHECK(std::abs(p2 - 2.0 * p1) < 1e-3);
    // Negative degrees flip the period sign.
    const double pm =
        chern_form(sphere_map_seed({-1, 0, 0, 0, 0, 0}, g, m), m).periods[0];
    CHECK(std::abs(pm + 1.0) < 1e-3);
}

TEST_CASE("periods are invariant under grid translation") {
    const Grid g(16);
    const MetricField m = MetricField::flat();
    const CompatibleJField j = sphere_map_seed({0, 0, 0, 1, 0, 0}, g, m);
    EndoField shifted(g);
    for (std::size_t idx = 0; idx < g.npts; ++idx)
        shifted[idx] = j.J[g.shift(g.shift(idx, 1, 3), 2, 5)];
    const ChernForm a = chern_form(j, m);
    const ChernForm b = chern_form(validate(shifted, m), m);
    for (int c = 0; c < 6; ++c)
        CHECK(a.periods[c] == doctest::Approx(b.periods[c]).epsilon(1e-12));
}

TEST_CASE("greatcircle structures have vanishing periods") {
    const Grid g(16);
    const MetricField m = MetricField::flat();
    const ChernForm c = chern_form(greatcircle_seed(g, m, 2), m);
    for (double p : c.periods) CHECK(std::abs(p) < 1e-10);
}

TEST_CASE("drift report handles degenerate and synthetic histories") {
    CHECK_THROWS_AS(chern_trajectory(std::vector<std::array<double, 6>>{}), Error);
    const std::array<double, 6> p0{0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
    const DriftReport single = chern_trajectory({p0});
    CHECK(single.max_drift == 0.0);
    std::array<double, 6> p1 = p0, p2 = p0;
    p1[1] = 1.0 + 3e-5;
    p2[4] = -7e-5;
    const DriftReport rep = chern_trajectory({p0, p1, p2});
    CHECK(rep.max_drift == doctest::Approx(7e-5).epsilon(1e-12));
    CHECK(rep.first == p0);
    CHECK(rep.last == p2);
}

TEST_CASE("periods stay put along a retraction path") {
    const Grid g(16);
    const MetricField m = MetricField::flat();
    const CompatibleJField j = sphere_map_seed({0, 0, 0, 0, 1, 0}, g, m);
    const TangentField s = tangent_project(j, random_bandlimited_endo(g, 5150, 1, 4), m);
    const double tmax = 0.3 / (s.max_pointwise_norm + 1e-30);
    std::vector<std::array<double, 6>> history;
    for (int k = 0; k < 16; ++k) {
        const double t = tmax * static_cast<double>(k) / 15.0;
        history.push_back(chern_form(retract_cayley(j, s, t, m), m).periods);
    }
    const DriftReport rep = chern_trajectory(history);
    CHECK(rep.max_drift < 1e-3);
}
