#pragma once

#include <string>

namespace bhacs {

// Options shared by every subcommand. Exit codes: 0 success (minimize:
// converged), 2 minimize finished without reaching the gradient tolerance,
// 1 any error.
struct CliCommon {
    std::string config_path;   // empty = built-in defaults
    std::string out_override;  // overrides the config's out_dir when set
    int threads = 0;           // 0 keeps the current setting
    bool quiet = false;
};

int cmd_minimize(const CliCommon& opts);
int cmd_verify(const CliCommon& opts, const std::string& snapshot_path);
int cmd_glue(const CliCommon& opts, const std::string& outer_path,
             const std::string& inner_path);
int cmd_chern(const CliCommon& opts, const std::string& snapshot_path);
int cmd_scan(const CliCommon& opts, const std::string& snapshot_path);
int cmd_plot(const CliCommon& opts, const std::string& trace_csv,
             const std::string& out_script);

}  // namespace bhacs
