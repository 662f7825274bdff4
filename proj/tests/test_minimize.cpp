#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "bhacs/minimize.hpp"
#include "bhacs/seeds.hpp"
#include "bhacs/topology.hpp"

using namespace bhacs;

TEST_CASE("optimizer config is validated") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    const CompatibleJField j = constant_seed(g, m);
    OptimizerConfig cfg;
    cfg.max_iters = -1;
    CHECK_THROWS_AS(minimize(j, m, cfg), Error);
    cfg = {};
    cfg.armijo_c = 1.5;
    CHECK_THROWS_AS(minimize(j, m, cfg), Error);
    cfg = {};
    cfg.armijo_shrink = 0.0;
    CHECK_THROWS_AS(minimize(j, m, cfg), Error);
}

TEST_CASE("a critical seed converges immediately") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    OptimizerConfig cfg;
    const MinimizeResult res = minimize(constant_seed(g, m), m, cfg);
    CHECK(res.status == OptStatus::Converged);
    CHECK(res.trace.size() == 1);  // seed evaluation only
    CHECK(res.trace[0].e2 == 0.0);
    CHECK(res.trace[0].grad_norm == 0.0);

    const MinimizeResult gc = minimize(greatcircle_seed(g, m, 1), m, cfg);
    CHECK(gc.status == OptStatus::Converged);
    CHECK(gc.trace.size() == 1);
    CHECK(gc.trace[0].e2 > 1.0);
}

TEST_CASE("descent from a perturbed seed is monotone and converges") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    const CompatibleJField j0 = perturbation_seed(g, m, 0.1, 1);
    OptimizerConfig cfg;
    cfg.max_iters = 2000;
    cfg.grad_tol = 1e-8;
    int callbacks = 0;
    const MinimizeResult res =
        minimize(j0, m, cfg, [&](const TraceEntry&, const CompatibleJField&) { ++callbacks; });
    CHECK(res.status == OptStatus::Converged);
    CHECK(static_cast<std::size_t>(callbacks) == res.trace.size());
    REQUIRE(res.trace.size() >= 2);
    CHECK(res.trace[0].e2 > 1e-4);       // seed has real energy
    CHECK(res.trace.back().e2 <= 1e-10);  // pinned: grad_tol 1e-8 drives e2 down
    CHECK(res.trace.back().grad_norm < 1e-8);
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
        CHECK(res.trace[i].e2 < res.trace[i - 1].e2);  // strict descent
        CHECK(res.trace[i].iter == static_cast<int>(i));
        CHECK(res.trace[i].step > 0.0);
    }
    // The final field satisfies the constraints tightly.
    CHECK(res.j_final.max_sq_violation < 1e-9);
    CHECK(res.j_final.max_skew_violation < 1e-9);
    // Residuals in the trace match the gradient identity |G| = 2 R.
    for (const TraceEntry& t : res.trace)
        CHECK(t.grad_norm == doctest::Approx(2.0 * t.residual_commutator).epsilon(1e-11));
}

TEST_CASE("armijo acceptance holds along the recorded trace") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    OptimizerConfig cfg;
    cfg.max_iters = 50;
    cfg.grad_tol = 1e-12;
    const MinimizeResult res = minimize(perturbation_seed(g, m, 0.12, 1), m, cfg);
    REQUIRE(res.trace.size() >= 3);
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
        const TraceEntry& prev = res.trace[i - 1];
        const TraceEntry& cur = res.trace[i];
        const double bound =
            prev.e2 - cfg.armijo_c * cur.step * prev.grad_norm * prev.grad_norm;
        CHECK(cur.e2 <= bound + 1e-15 * (1.0 + std::abs(bound)));
    }
}

TEST_CASE("max iteration budget is respected and reported") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    OptimizerConfig cfg;
    cfg.max_iters = 3;
    cfg.grad_tol = 1e-16;
    const MinimizeResult res = minimize(perturbation_seed(g, m, 0.1, 1), m, cfg);
    CHECK(res.status == OptStatus::MaxIters);
    CHECK(res.trace.size() == 4);  // seed + 3 iterations
}

TEST_CASE("checkpoint callback fires at the configured cadence") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    OptimizerConfig cfg;
    cfg.max_iters = 10;
    cfg.grad_tol = 1e-16;
    cfg.checkpoint_every = 4;
    std::vector<int> iters;
    const MinimizeResult res =
        minimize(perturbation_seed(g, m, 0.1, 1), m, cfg, {},
                 [&](int iter, const CompatibleJField&) { iters.push_back(iter); });
    REQUIRE(iters.size() == 2);
    CHECK(iters[0] == 4);
    CHECK(iters[1] == 8);
    CHECK(res.trace.size() == 11);
}

TEST_CASE("runs are deterministic") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    OptimizerConfig cfg;
    cfg.max_iters = 40;
    const CompatibleJField j0 = perturbation_seed(g, m, 0.1, 2);
    const MinimizeResult a = minimize(j0, m, cfg);
    const MinimizeResult b = minimize(j0, m, cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].e2 == b.trace[i].e2);
        CHECK(a.trace[i].grad_norm == b.trace[i].grad_norm);
        CHECK(a.trace[i].step == b.trace[i].step);
    }
    CHECK(std::memcmp(a.j_final.J.data.data(), b.j_final.J.data.data(),
                      g.npts * sizeof(Mat4)) == 0);
}

TEST_CASE("descent works under a non-euclidean metric") {
    const Grid g(8);
    Mat4 gm = Mat4::identity();
    gm(0, 0) = 1.2;
    gm(1, 1) = 0.8;
    gm(0, 1) = gm(1, 0) = 0.1;
    const MetricField m = MetricField::constant(gm);
    OptimizerConfig cfg;
    cfg.max_iters = 400;
    cfg.grad_tol = 1e-6;
    const MinimizeResult res = minimize(perturbation_seed(g, m, 0.1, 1), m, cfg);
    CHECK(res.status == OptStatus::Converged);
    CHECK(res.trace.back().e2 < 1e-6);
    CHECK(res.j_final.max_skew_violation < 1e-9);
}

TEST_CASE("concentration scan reports monotone ball masses") {
    const Grid g(16);
    const MetricField m = MetricField::flat();
    const CompatibleJField j = perturbation_seed(g, m, 0.3, 1);
    const std::vector<double> radii{0.125, 0.25, 0.375};
    const ConcentrationReport rep = concentration_scan(j, m, radii, 1e9);
    CHECK(rep.radii == radii);
    CHECK(rep.centers.size() == 4096);  // stride n/8 = 2 -> 8 centers per axis
    CHECK(rep.flagged.empty());       // eps0 enormous, nothing flags
    for (const auto& fv : rep.f_values) {
        REQUIRE(fv.size() == radii.size());
        CHECK(fv[0] > 0.0);
        CHECK(fv[0] <= fv[1]);
        CHECK(fv[1] <= fv[2]);
    }
    // With a tiny threshold every (center, radius) pair flags.
    const ConcentrationReport all = concentration_scan(j, m, radii, 1e-12);
    CHECK(all.flagged.size() == rep.centers.size() * radii.size());

    CHECK_THROWS_AS(concentration_scan(j, m, {0.01}, 1e9), Error);  // below 2h
    CHECK_THROWS_AS(concentration_scan(j, m, {0.6}, 1e9), Error);   // >= half period
}

TEST_CASE("sequence experiment summarizes multiple starts") {
    const Grid g(8);
    const MetricField m = MetricField::flat();
    std::vector<CompatibleJField> seeds;
    seeds.push_back(perturbation_seed(g, m, 0.05, 1));
    seeds.push_back(perturbation_seed(g, m, 0.1, 2));
    OptimizerConfig cfg;
    cfg.max_iters = 600;
    cfg.grad_tol = 1e-7;
    const SequenceReport rep = sequence_experiment(seeds, m, cfg);
    REQUIRE(rep.statuses.size() == 2);
    CHECK(rep.statuses[0] == OptStatus::Converged);
    CHECK(rep.statuses[1] == OptStatus::Converged);
    CHECK(rep.final_e2[0] < 1e-8);
    CHECK(rep.final_e2[1] < 1e-8);
    CHECK(rep.empirical_inf ==
          doctest::Approx(std::min(rep.final_e2[0], rep.final_e2[1])).epsilon(1e-15));
    // Both runs end near the constant structure: pairwise distance small.
    REQUIRE(rep.w12_distance.size() == 2);
    CHECK(rep.w12_distance[0][1] == doctest::Approx(rep.w12_distance[1][0]).epsilon(1e-13));
    CHECK(rep.w12_distance[0][0] == 0.0);
    // Trivial class seeds: all periods essentially zero, before and after.
    for (int c = 0; c < 6; ++c) {
        CHECK(std::abs(rep.periods_start[0][c]) < 1e-8);
        CHECK(std::abs(rep.periods_end[0][c]) < 1e-8);
    }
}

TEST_CASE("status strings are stable") {
    CHECK(std::string(to_string(OptStatus::Converged)) == "converged");
    CHECK(std::string(to_string(OptStatus::MaxIters)) == "max-iterations");
    CHECK(std::string(to_string(OptStatus::Stalled)) == "stalled");
}
