#include <string>

#include "CLI11.hpp"
#include "bhacs/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"variational toolkit for compatible almost complex structures on the flat 4-torus"};
    app.require_subcommand(1);

    bhacs::CliCommon common;
    app.add_option("--config", common.config_path, "key=value configuration file");
    app.add_option("--out", common.out_override, "output directory (overrides the config)");
    app.add_option("--threads", common.threads, "worker thread count")
        ->envname("BHACS_THREADS");
    app.add_flag("--quiet", common.quiet, "suppress normal output");

    auto* sub_min = app.add_subcommand("minimize", "run the energy descent from a seed field");
    sub_min->fallthrough();

    std::string verify_path;
    auto* sub_verify = app.add_subcommand("verify", "energies and residuals of a snapshot");
    sub_verify->fallthrough();
    sub_verify->add_option("snapshot", verify_path, "field snapshot")->required();

    std::string glue_outer, glue_inner;
    auto* sub_glue = app.add_subcommand("glue", "splice an inner field into an outer field");
    sub_glue->fallthrough();
    sub_glue->add_option("outer", glue_outer, "outer field snapshot")->required();
    sub_glue->add_option("inner", glue_inner, "inner field snapshot")->required();

    std::string chern_path;
    auto* sub_chern = app.add_subcommand("chern", "Chern form periods of a snapshot");
    sub_chern->fallthrough();
    sub_chern->add_option("snapshot", chern_path, "field snapshot")->required();

    std::string scan_path;
    auto* sub_scan = app.add_subcommand("scan", "energy concentration scan over ball centers");
    sub_scan->fallthrough();
    sub_scan->add_option("snapshot", scan_path, "field snapshot")->required();

    std::string plot_trace, plot_out = "trace.gp";
    auto* sub_plot = app.add_subcommand("plot", "emit a gnuplot script for a trace CSV");
    sub_plot->fallthrough();
    sub_plot->add_option("trace", plot_trace, "trace.csv produced by minimize")->required();
    sub_plot->add_option("script", plot_out, "output script path (default trace.gp)");

    CLI11_PARSE(app, argc, argv);

    if (*sub_min) return bhacs::cmd_minimize(common);
    if (*sub_verify) return bhacs::cmd_verify(common, verify_path);
    if (*sub_glue) return bhacs::cmd_glue(common, glue_outer, glue_inner);
    if (*sub_chern) return bhacs::cmd_chern(common, chern_path);
    if (*sub_scan) return bhacs::cmd_scan(common, scan_path);
    if (*sub_plot) return bhacs::cmd_plot(common, plot_trace, plot_out);
    return 1;
}
