#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "bhacs/acs.hpp"
#include "bhacs/metric.hpp"

namespace bhacs {

// Flat key=value run configuration ('#' comments, blank lines allowed).
// Unknown keys are rejected with the offending line number. Defaults below.
struct Config {
    int grid_n = 16;
    std::string metric = "flat";      // flat | diag:a,b,c,d | full:<16 numbers>
    std::string seed = "constant";    // see seed_from_spec
    int max_iters = 5000;
    double grad_tol = 1e-8;
    double initial_step = 0.0;
    double armijo_c = 1e-4;
    double armijo_shrink = 0.5;
    int checkpoint_every = 0;
    std::uint64_t rng_seed = 1;
    std::string out_dir = ".";

    int glue_j = 2;
    std::string glue_center;          // "i0,i1,i2,i3"; empty = grid center
    double glue_scale = 0.25;
    double glue_eps0 = 0.1;
    double glue_close_tol = 0.5;
    double glue_sigma_min = 0.01;

    std::string scan_radii;           // comma-separated physical radii
    double scan_eps0 = 0.1;
    int scan_stride = 0;              // 0 = n/8
};

Config parse_config(const std::string& path);
Config parse_config_text(const std::string& text, const std::string& origin);

// Metric from its config descriptor.
MetricField metric_from_spec(const std::string& spec);

// Seed field from its config descriptor:
//   constant | perturbation:eps,mode | greatcircle:k |
//   sphere:d01,d02,d03,d12,d13,d23 | random[:amplitude] | snapshot:path
CompatibleJField seed_from_spec(const std::string& spec, const Grid& grid,
                                const MetricField& metric, std::uint64_t rng_seed);

// Strict numeric parsing helpers (whole-string, with context in errors).
int parse_int(const std::string& s, const std::string& what);
double parse_double(const std::string& s, const std::string& what);
std::uint64_t parse_u64(const std::string& s, const std::string& what);
std::array<int, 4> parse_int4(const std::string& s, const std::string& what);

}  // namespace bhacs
