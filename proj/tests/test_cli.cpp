#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bhacs/cli.hpp"
#include "bhacs/config.hpp"
#include "bhacs/seeds.hpp"
#include "bhacs/snapshot.hpp"

using namespace bhacs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("bhacs_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("config text parsing covers all keys and rejects unknown ones") {
    const std::string text =
        "# comment line\n"
        "grid_n = 8\n"
        "\n"
        "metric = diag:1,2,0.5,1.5\n"
        "seed = perturbation:0.1,2\n"
        "max_iters = 77\n"
        "grad_tol = 1e-6\n"
        "initial_step = 0.001\n"
        "armijo_c = 0.0001\n"
        "armijo_shrink = 0.25\n"
        "checkpoint_every = 5\n"
        "rng_seed = 12345\n"
        "out_dir = /tmp/x\n"
        "glue_j = 3\n"
        "glue_center = 1,2,3,4\n"
        "glue_scale = 0.3\n"
        "glue_eps0 = 0.2\n"
        "glue_close_tol = 0.4\n"
        "glue_sigma_min = 0.02\n"
        "scan_radii = 0.25,0.375\n"
        "scan_eps0 = 0.15\n"
        "scan_stride = 4\n";
    const Config c = parse_config_text(text, "inline");
    CHECK(c.grid_n == 8);
    CHECK(c.metric == "diag:1,2,0.5,1.5");
    CHECK(c.seed == "perturbation:0.1,2");
    CHECK(c.max_iters == 77);
    CHECK(c.grad_tol == 1e-6);
    CHECK(c.initial_step == 0.001);
    CHECK(c.armijo_c == 0.0001);
    CHECK(c.armijo_shrink == 0.25);
    CHECK(c.checkpoint_every == 5);
    CHECK(c.rng_seed == 12345);
    CHECK(c.out_dir == "/tmp/x");
    CHECK(c.glue_j == 3);
    CHECK(c.glue_center == "1,2,3,4");
    CHECK(c.glue_scale == 0.3);
    CHECK(c.glue_eps0 == 0.2);
    CHECK(c.glue_close_tol == 0.4);
    CHECK(c.glue_sigma_min == 0.02);
    CHECK(c.scan_radii == "0.25,0.375");
    CHECK(c.scan_eps0 == 0.15);
    CHECK(c.scan_stride == 4);

    try {
        parse_config_text("grid_n = 8\nbogus_key = 1\n", "cfg");
        FAIL("expected unknown-key error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("cfg:2") != std::string::npos);
        CHECK(msg.find("bogus_key") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("grid_n eight\n", "cfg"), Error);
    CHECK_THROWS_AS(parse_config_text("grid_n = eight\n", "cfg"), Error);
}

TEST_CASE("metric and seed descriptors build the right objects") {
    CHECK(metric_from_spec("flat").is_identity);
    const MetricField d = metric_from_spec("diag:1,2,0.5,1.5");
    CHECK(d.g(1, 1) == 2.0);
    CHECK(d.g(2, 2) == 0.5);
    const MetricField f = metric_from_spec(
        "full:1,0.2,0,0, 0.2,1.3,0,0, 0,0,1,-0.15, 0,0,-0.15,0.9");
    CHECK(f.g(0, 1) == 0.2);
    CHECK(f.g(3, 3) == 0.9);
    CHECK_THROWS_AS(metric_from_spec("diag:1,2"), Error);
    CHECK_THROWS_AS(metric_from_spec("banana"), Error);

    const Grid g(8);
    const MetricField m = MetricField::flat();
    CHECK_NOTHROW(seed_from_spec("constant", g, m, 1));
    CHECK_NOTHROW(seed_from_spec("perturbation:0.1,1", g, m, 1));
    CHECK_NOTHROW(seed_from_spec("greatcircle:2", g, m, 1));
    CHECK_NOTHROW(seed_from_spec("sphere:1,0,0,0,0,0", g, m, 1));
    CHECK_NOTHROW(seed_from_spec("random", g, m, 1));
    CHECK_NOTHROW(seed_from_spec("random:0.2", g, m, 1));
    CHECK_THROWS_AS(seed_from_spec("sphere:1,1,0,0,0,0", g, m, 1), Error);
    CHECK_THROWS_AS(seed_from_spec("nonsense", g, m, 1), Error);

    // Same rng_seed, same random field.
    const CompatibleJField r1 = seed_from_spec("random", g, m, 9);
    const CompatibleJField r2 = seed_from_spec("random", g, m, 9);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < g.npts; ++idx)
        worst = std::max(worst, max_abs(r1.J[idx] - r2.J[idx]));
    CHECK(worst == 0.0);
}

TEST_CASE("strict numeric parsing rejects partial tokens") {
    CHECK(parse_int("42", "x") == 42);
    CHECK(parse_int("-3", "x") == -3);
    CHECK_THROWS_AS(parse_int("42x", "x"), Error);
    CHECK_THROWS_AS(parse_int("", "x"), Error);
    CHECK(parse_double("2.5e-3", "x") == 2.5e-3);
    CHECK_THROWS_AS(parse_double("2.5q", "x"), Error);
    CHECK(parse_u64("18446744073709551615", "x") == 18446744073709551615ull);
    CHECK_THROWS_AS(parse_u64("-1", "x"), Error);
    const std::array<int, 4> c = parse_int4("1,2,3,4", "x");
    CHECK(c[3] == 4);
    CHECK_THROWS_AS(parse_int4("1,2,3", "x"), Error);
}

TEST_CASE("snapshots round trip bit for bit") {
    TempDir tmp;
    const Grid g(8);
    const MetricField m = metric_from_spec("diag:1,2,0.5,1.5");
    const CompatibleJField j = constant_seed(g, m);
    SnapshotMeta meta;
    meta.label = "roundtrip test";
    meta.e2 = 1.25e-3;
    meta.e1 = 0.5;
    meta.periods = {0.0, 1.0, 0.0, -1.0, 0.0, 0.25};
    const std::string p1 = tmp.file("a.snap");
    const std::string p2 = tmp.file("b.snap");
    save_snapshot(p1, j.J, m, meta);

    const Snapshot s = load_snapshot(p1);
    CHECK(s.meta.label == meta.label);
    CHECK(s.meta.e2 == meta.e2);
    CHECK(s.meta.e1 == meta.e1);
    CHECK(s.meta.periods == meta.periods);
    CHECK(s.field.grid.n == 8);
    CHECK(!s.metric.is_identity);
    CHECK(s.metric.g(1, 1) == 2.0);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < g.npts; ++idx)
        worst = std::max(worst, max_abs(s.field[idx] - j.J[idx]));
    CHECK(worst == 0.0);

    save_snapshot(p2, s.field, s.metric, s.meta);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("snapshot loading rejects malformed files") {
    TempDir tmp;
    const std::string good = tmp.file("good.snap");
    const Grid g(8);
    const MetricField m = MetricField::flat();
    save_snapshot(good, constant_seed(g, m).J, m, {});

    CHECK_THROWS_AS(load_snapshot(tmp.file("missing.snap")), Error);

    std::string bytes = slurp(good);
    bytes[0] = 'X';
    const std::string bad_magic = tmp.file("bad_magic.snap");
    spit(bad_magic, bytes);
    CHECK_THROWS_AS(load_snapshot(bad_magic), Error);

    const std::string truncated = tmp.file("trunc.snap");
    spit(truncated, slurp(good).substr(0, 1000));
    CHECK_THROWS_AS(load_snapshot(truncated), Error);

    const std::string padded = tmp.file("padded.snap");
    spit(padded, slurp(good) + "extra");
    CHECK_THROWS_AS(load_snapshot(padded), Error);
}

TEST_CASE("minimize command produces deterministic artifacts and exit codes") {
    TempDir tmp;
    const std::string cfg = tmp.file("run.cfg");
    spit(cfg,
         "grid_n = 8\n"
         "seed = perturbation:0.1,1\n"
         "max_iters = 500\n"
         "grad_tol = 1e-8\n"
         "checkpoint_every = 5\n"
         "out_dir = " + tmp.file("out1") + "\n");
    CliCommon opts;
    opts.config_path = cfg;
    opts.quiet = true;
    CHECK(cmd_minimize(opts) == 0);

    const std::string trace1 = tmp.file("out1") + "/trace.csv";
    REQUIRE(fs::exists(trace1));
    std::ifstream in(trace1);
    std::string header;
    std::getline(in, header);
    CHECK(header == "iteration,e2,e1,grad_norm,step,residual_commutator");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows >= 2);
    REQUIRE(fs::exists(tmp.file("out1") + "/final.snap"));
    REQUIRE(fs::exists(tmp.file("out1") + "/checkpoint_000005.snap"));

    // Second run into a fresh directory: byte-identical trace.
    CliCommon opts2 = opts;
    opts2.out_override = tmp.file("out2");
    CHECK(cmd_minimize(opts2) == 0);
    CHECK(slurp(trace1) == slurp(tmp.file("out2") + "/trace.csv"));
    CHECK(slurp(tmp.file("out1") + "/final.snap") ==
          slurp(tmp.file("out2") + "/final.snap"));

    // Tiny budget: finishes without converging, exit code 2.
    const std::string cfg3 = tmp.file("short.cfg");
    spit(cfg3,
         "grid_n = 8\n"
         "seed = perturbation:0.1,1\n"
         "max_iters = 2\n"
         "grad_tol = 1e-14\n"
         "out_dir = " + tmp.file("out3") + "\n");
    CliCommon opts3;
    opts3.config_path = cfg3;
    opts3.quiet = true;
    CHECK(cmd_minimize(opts3) == 2);
}

TEST_CASE("verify and chern commands accept a snapshot") {
    TempDir tmp;
    const Grid g(8);
    const MetricField m = MetricField::flat();
    const std::string snap = tmp.file("field.snap");
    SnapshotMeta meta;
    meta.label = "verify input";
    save_snapshot(snap, greatcircle_seed(g, m, 1).J, m, meta);
    CliCommon opts;
    opts.quiet = true;
    CHECK(cmd_verify(opts, snap) == 0);
    CHECK(cmd_chern(opts, snap) == 0);
    CHECK(cmd_verify(opts, tmp.file("nope.snap")) == 1);
}

TEST_CASE("glue command splices two snapshots") {
    TempDir tmp;
    const Grid g(16);
    const MetricField m = MetricField::flat();
    save_snapshot(tmp.file("outer.snap"), constant_seed(g, m).J, m, {});
    save_snapshot(tmp.file("inner.snap"), perturbation_seed(g, m, 0.05, 1).J, m, {});
    const std::string cfg = tmp.file("glue.cfg");
    spit(cfg,
         "grid_n = 16\n"
         "glue_j = 2\n"
         "glue_scale = 0.25\n"
         "out_dir = " + tmp.file("gout") + "\n");
    CliCommon opts;
    opts.config_path = cfg;
    opts.quiet = true;
    CHECK(cmd_glue(opts, tmp.file("outer.snap"), tmp.file("inner.snap")) == 0);
    REQUIRE(fs::exists(tmp.file("gout") + "/glued.snap"));
    const Snapshot s = load_snapshot(tmp.file("gout") + "/glued.snap");
    CHECK(s.field.grid.n == 16);

    // Mismatched metrics are refused.
    save_snapshot(tmp.file("other.snap"), constant_seed(g, metric_from_spec("diag:1,2,0.5,1.5")).J,
                  metric_from_spec("diag:1,2,0.5,1.5"), {});
    CHECK(cmd_glue(opts, tmp.file("outer.snap"), tmp.file("other.snap")) == 1);
}

TEST_CASE("scan command writes one row per center and radius") {
    TempDir tmp;
    const Grid g(8);
    const MetricField m = MetricField::flat();
    save_snapshot(tmp.file("f.snap"), perturbation_seed(g, m, 0.2, 1).J, m, {});
    const std::string cfg = tmp.file("scan.cfg");
    spit(cfg,
         "grid_n = 8\n"
         "scan_radii = 0.25,0.375\n"
         "scan_stride = 4\n"
         "out_dir = " + tmp.file("sout") + "\n");
    CliCommon opts;
    opts.config_path = cfg;
    opts.quiet = true;
    CHECK(cmd_scan(opts, tmp.file("f.snap")) == 0);
    const std::string csv = slurp(tmp.file("sout") + "/scan.csv");
    std::istringstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header == "center0,center1,center2,center3,radius,f");
    std::size_t rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == 16 * 2);  // stride 4 at n=8 -> 2 centers/axis -> 16, two radii
}

TEST_CASE("plot command emits a self-contained gnuplot script") {
    TempDir tmp;
    const std::string trace = tmp.file("trace.csv");
    spit(trace,
         "iteration,e2,e1,grad_norm,step,residual_commutator\n"
         "0,1.0,2.0,0.5,0,0.25\n"
         "1,0.5,1.5,0.25,0.01,0.125\n");
    CliCommon opts;
    opts.quiet = true;
    const std::string script = tmp.file("plot.gp");
    CHECK(cmd_plot(opts, trace, script) == 0);
    const std::string text = slurp(script);
    CHECK(text.find("$DATA") != std::string::npos);
    CHECK(text.find("pngcairo") != std::string::npos);
    CHECK(text.find("logscale") != std::string::npos);
    CHECK(text.find("1 0.5 1.5 0.25 0.01 0.125") != std::string::npos);

    const std::string bad = tmp.file("bad.csv");
    spit(bad, "wrong,header\n1,2\n");
    CHECK(cmd_plot(opts, bad, tmp.file("bad.gp")) == 1);
}

TEST_CASE("config file loading reports io failures") {
    CHECK_THROWS_AS(parse_config("/nonexistent/path/x.cfg"), Error);
}
