#include "bhacs/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bhacs/config.hpp"
#include "bhacs/energy.hpp"
#include "bhacs/glue.hpp"
#include "bhacs/minimize.hpp"
#include "bhacs/parallel.hpp"
#include "bhacs/snapshot.hpp"
#include "bhacs/topology.hpp"

namespace bhacs {

namespace {

namespace fs = std::filesystem;

Config load_cfg(const CliCommon& opts) {
    Config cfg = opts.config_path.empty() ? Config{} : parse_config(opts.config_path);
    if (!opts.out_override.empty()) cfg.out_dir = opts.out_override;
    return cfg;
}

void apply_threads(const CliCommon& opts) {
    if (opts.threads > 0) set_num_threads(opts.threads);
}

std::string csv_row(const TraceEntry& te) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", te.iter, te.e2, te.e1,
                  te.grad_norm, te.step, te.residual_commutator);
    return buf;
}

std::array<double, 6> periods_of(const CompatibleJField& j, const MetricField& metric) {
    if (!metric.is_identity) return {};
    return chern_form(j, metric).periods;
}

void print_periods(std::ostream& os, const std::array<double, 6>& p) {
    static const char* names[6] = {"01", "02", "03", "12", "13", "23"};
    for (int c = 0; c < 6; ++c) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "  period[%s] = %+.9f\n", names[c], p[c]);
        os << buf;
    }
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_minimize(const CliCommon& opts) {
    apply_threads(opts);
    const Config cfg = load_cfg(opts);
    const Grid grid(cfg.grid_n);
    const MetricField metric = metric_from_spec(cfg.metric);
    const CompatibleJField seed = seed_from_spec(cfg.seed, grid, metric, cfg.rng_seed);

    OptimizerConfig oc;
    oc.max_iters = cfg.max_iters;
    oc.grad_tol = cfg.grad_tol;
    oc.initial_step = cfg.initial_step;
    oc.armijo_c = cfg.armijo_c;
    oc.armijo_shrink = cfg.armijo_shrink;
    oc.checkpoint_every = cfg.checkpoint_every;
    oc.seed = cfg.rng_seed;

    fs::create_directories(cfg.out_dir);
    const fs::path trace_path = fs::path(cfg.out_dir) / "trace.csv";
    std::ofstream trace(trace_path);
    if (!trace) throw Error("minimize: cannot open '" + trace_path.string() + "' for writing");
    trace << "iteration,e2,e1,grad_norm,step,residual_commutator\n";

    TraceEntry last{};
    const IterCallback on_iter = [&](const TraceEntry& te, const CompatibleJField&) {
        last = te;
        trace << csv_row(te);
    };
    const CheckpointCallback on_checkpoint = [&](int iter, const CompatibleJField& j) {
        char name[64];
        std::snprintf(name, sizeof name, "checkpoint_%06d.snap", iter);
        SnapshotMeta meta;
        meta.label = name;
        meta.e2 = last.e2;
        meta.e1 = last.e1;
        meta.periods = periods_of(j, metric);
        save_snapshot((fs::path(cfg.out_dir) / name).string(), j.J, metric, meta);
    };

    const MinimizeResult result = minimize(seed, metric, oc, on_iter, on_checkpoint);
    trace.close();
    if (!trace) throw Error("minimize: writing '" + trace_path.string() + "' failed");

    SnapshotMeta meta;
    meta.label = "final";
    meta.e2 = result.trace.back().e2;
    meta.e1 = result.trace.back().e1;
    meta.periods = periods_of(result.j_final, metric);
    const fs::path final_path = fs::path(cfg.out_dir) / "final.snap";
    save_snapshot(final_path.string(), result.j_final.J, metric, meta);

    if (!opts.quiet) {
        std::cout << "status:      " << to_string(result.status) << "\n"
                  << "iterations:  " << result.trace.back().iter << "\n";
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "e2:          %.12e\ne1:          %.12e\ngrad norm:   %.12e\n"
                      "commutator:  %.12e\n",
                      meta.e2, meta.e1, result.trace.back().grad_norm,
                      result.trace.back().residual_commutator);
        std::cout << buf;
        if (metric.is_identity) print_periods(std::cout, meta.periods);
        std::cout << "trace:       " << trace_path.string() << "\n"
                  << "final field: " << final_path.string() << "\n";
    }
    return result.status == OptStatus::Converged ? 0 : 2;
}

int run_verify(const CliCommon& opts, const std::string& snapshot_path) {
    apply_threads(opts);
    const Snapshot snap = load_snapshot(snapshot_path);
    const CompatibleJField j = validate(snap.field, snap.metric);
    const EnergyReport rep = full_report(j, snap.metric);
    if (!opts.quiet) {
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "label:               %s\ngrid:                n = %d\n"
                      "e2:                  %.12e\ne1:                  %.12e\n"
                      "stored e2:           %.12e\nstored e1:           %.12e\n"
                      "residual commutator: %.12e\nresidual strong:     %.12e\n"
                      "residual weak (max): %.12e\n",
                      snap.meta.label.c_str(), snap.field.grid.n, rep.e2, rep.e1, snap.meta.e2,
                      snap.meta.e1, rep.residual_commutator, rep.residual_strong,
                      rep.residual_weak_max);
        std::cout << buf;
        if (snap.metric.is_identity) {
            const double tilde = energy_symplectic(j, snap.metric);
            std::snprintf(buf, sizeof buf, "form energy:         %.12e\n", tilde);
            std::cout << buf;
            print_periods(std::cout, chern_form(j, snap.metric).periods);
        }
    }
    return 0;
}

int run_glue(const CliCommon& opts, const std::string& outer_path,
             const std::string& inner_path) {
    apply_threads(opts);
    const Config cfg = load_cfg(opts);
    const Snapshot outer = load_snapshot(outer_path);
    const Snapshot inner = load_snapshot(inner_path);
    require_same_grid(outer.field.grid, inner.field.grid, "glue");
    if (max_abs(outer.metric.g - inner.metric.g) != 0.0)
        throw Error("glue: the two snapshots carry different metrics");
    const MetricField& metric = outer.metric;
    const CompatibleJField j_out = validate(outer.field, metric);
    const CompatibleJField j_in = validate(inner.field, metric);

    const int n = outer.field.grid.n;
    std::array<int, 4> center = {n / 2, n / 2, n / 2, n / 2};
    if (!cfg.glue_center.empty()) center = parse_int4(cfg.glue_center, "glue_center");

    const GlueProfile profile = GlueProfile::standard(cfg.glue_j);
    const MollifierKernel kernel = MollifierKernel::standard();
    GlueOptions gopts;
    gopts.eps0 = cfg.glue_eps0;
    gopts.close_tol = cfg.glue_close_tol;
    gopts.sigma_min = cfg.glue_sigma_min;

    const GlueResult res =
        glue(j_out, j_in, profile, kernel, center, cfg.glue_scale, metric, gopts);

    fs::create_directories(cfg.out_dir);
    const EnergyReport rep = energy_e2(res.j_glued, metric, false);
    SnapshotMeta meta;
    meta.label = "glued";
    meta.e2 = rep.e2;
    meta.e1 = rep.e1;
    meta.periods = periods_of(res.j_glued, metric);
    const fs::path out_path = fs::path(cfg.out_dir) / "glued.snap";
    save_snapshot(out_path.string(), res.j_glued.J, metric, meta);

    if (!opts.quiet) {
        char buf[384];
        std::snprintf(buf, sizeof buf,
                      "annulus energy:   %.12e\nmu neighborhood:  %.12e\n"
                      "mollified points: %zu\ndegraded points:  %zu\n"
                      "e2:               %.12e\noutput:           %s\n",
                      res.annulus_energy, res.mu_neighborhood,
                      res.mollify_stats.mollified_points, res.mollify_stats.degraded_points,
                      rep.e2, out_path.string().c_str());
        std::cout << buf;
    }
    return 0;
}

int run_chern(const CliCommon& opts, const std::string& snapshot_path) {
    apply_threads(opts);
    const Snapshot snap = load_snapshot(snapshot_path);
    const CompatibleJField j = validate(snap.field, snap.metric);
    const ChernForm ch = chern_form(j, snap.metric);
    if (!opts.quiet) {
        static const char* names[6] = {"01", "02", "03", "12", "13", "23"};
        for (int c = 0; c < 6; ++c) {
            const long nearest = std::lround(ch.periods[c]);
            char buf[128];
            std::snprintf(buf, sizeof buf, "period[%s] = %+.9f  (nearest integer %+ld, off by %.3e)\n",
                          names[c], ch.periods[c], nearest,
                          std::abs(ch.periods[c] - static_cast<double>(nearest)));
            std::cout << buf;
        }
    }
    return 0;
}

int run_scan(const CliCommon& opts, const std::string& snapshot_path) {
    apply_threads(opts);
    const Config cfg = load_cfg(opts);
    if (cfg.scan_radii.empty())
        throw Error("scan: config must set scan_radii (comma-separated physical radii)");
    std::vector<double> radii;
    {
        std::istringstream is(cfg.scan_radii);
        std::string part;
        while (std::getline(is, part, ','))
            radii.push_back(parse_double(part, "scan_radii entry"));
    }
    const Snapshot snap = load_snapshot(snapshot_path);
    const CompatibleJField j = validate(snap.field, snap.metric);
    const ConcentrationReport rep =
        concentration_scan(j, snap.metric, radii, cfg.scan_eps0, cfg.scan_stride);

    fs::create_directories(cfg.out_dir);
    const fs::path csv_path = fs::path(cfg.out_dir) / "scan.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw Error("scan: cannot open '" + csv_path.string() + "' for writing");
    csv << "center0,center1,center2,center3,radius,f\n";
    for (std::size_t ci = 0; ci < rep.centers.size(); ++ci)
        for (std::size_t ri = 0; ri < rep.radii.size(); ++ri) {
            char buf[192];
            std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g,%.17g\n", rep.centers[ci][0],
                          rep.centers[ci][1], rep.centers[ci][2], rep.centers[ci][3],
                          rep.radii[ri], rep.f_values[ci][ri]);
            csv << buf;
        }
    csv.close();

    if (!opts.quiet) {
        double worst = 0.0;
        for (const auto& fv : rep.f_values)
            for (double f : fv) worst = std::max(worst, f);
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "centers:        %zu\nradii:          %zu\nlargest F:      %.12e\n"
                      "flagged pairs:  %zu (threshold %.3e)\noutput:         %s\n",
                      rep.centers.size(), rep.radii.size(), worst, rep.flagged.size(),
                      cfg.scan_eps0, csv_path.string().c_str());
        std::cout << buf;
    }
    return 0;
}

int run_plot(const CliCommon& opts, const std::string& trace_csv,
             const std::string& out_script) {
    std::ifstream is(trace_csv);
    if (!is) throw Error("plot: cannot open '" + trace_csv + "'");
    std::string header;
    if (!std::getline(is, header) || header.rfind("iteration,", 0) != 0)
        throw Error("plot: '" + trace_csv + "' does not look like an optimizer trace");
    std::ostringstream data;
    std::string line;
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        data << line << "\n";
        ++rows;
    }
    if (rows == 0) throw Error("plot: no data rows in '" + trace_csv + "'");

    std::ofstream os(out_script);
    if (!os) throw Error("plot: cannot open '" + out_script + "' for writing");
    os << "# gnuplot script for an optimizer trace; run: gnuplot " << out_script << "\n"
       << "set terminal pngcairo size 1100,800\n"
       << "set output 'trace.png'\n"
       << "$DATA << EOD\n"
       << data.str() << "EOD\n"
       << "set multiplot layout 2,1\n"
       << "set logscale y\n"
       << "set format y '%.1e'\n"
       << "set xlabel 'iteration'\n"
       << "set ylabel 'energy'\n"
       << "plot $DATA using 1:2 with lines lw 2 title 'e2', \\\n"
       << "     $DATA using 1:3 with lines lw 2 title 'e1'\n"
       << "set ylabel 'first-order diagnostics'\n"
       << "plot $DATA using 1:4 with lines lw 2 title 'gradient norm', \\\n"
       << "     $DATA using 1:6 with lines lw 2 title 'commutator residual', \\\n"
       << "     $DATA using 1:5 with lines lw 1 title 'accepted step'\n"
       << "unset multiplot\n";
    os.close();
    if (!os) throw Error("plot: writing '" + out_script + "' failed");
    if (!opts.quiet)
        std::cout << "wrote " << out_script << " (" << rows << " rows)\n";
    return 0;
}

}  // namespace

int cmd_minimize(const CliCommon& opts) {
    return guarded([&] { return run_minimize(opts); });
}
int cmd_verify(const CliCommon& opts, const std::string& snapshot_path) {
    return guarded([&] { return run_verify(opts, snapshot_path); });
}
int cmd_glue(const CliCommon& opts, const std::string& outer_path,
             const std::string& inner_path) {
    return guarded([&] { return run_glue(opts, outer_path, inner_path); });
}
int cmd_chern(const CliCommon& opts, const std::string& snapshot_path) {
    return guarded([&] { return run_chern(opts, snapshot_path); });
}
int cmd_scan(const CliCommon& opts, const std::string& snapshot_path) {
    return guarded([&] { return run_scan(opts, snapshot_path); });
}
int cmd_plot(const CliCommon& opts, const std::string& trace_csv,
             const std::string& out_script) {
    return guarded([&] { return run_plot(opts, trace_csv, out_script); });
}

}  // namespace bhacs
