#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "bhacs/acs.hpp"
#include "bhacs/energy.hpp"

namespace bhacs {

struct OptimizerConfig {
    int max_iters = 5000;
    double grad_tol = 1e-8;      // stop when the L2 gradient norm drops below
    double initial_step = 0.0;   // 0 selects the h^4 heuristic
    double armijo_c = 1e-4;
    double armijo_shrink = 0.5;
    int checkpoint_every = 0;    // 0 disables checkpoint callbacks
    std::uint64_t seed = 0;      // recorded with runs; reserved for stochastic use
};

enum class OptStatus { Converged, MaxIters, Stalled };

const char* to_string(OptStatus s);

struct TraceEntry {
    int iter = 0;
    double e2 = 0.0;
    double e1 = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;  // step accepted by the line search leading into this iterate
    double residual_commutator = 0.0;
};

struct MinimizeResult {
    CompatibleJField j_final;
    OptStatus status = OptStatus::MaxIters;
    std::vector<TraceEntry> trace;  // entry 0 is the seed evaluation
};

// Called after each accepted iterate (and once for the seed).
using IterCallback = std::function<void(const TraceEntry&, const CompatibleJField&)>;
// Called every cfg.checkpoint_every accepted iterations.
using CheckpointCallback = std::function<void(int iter, const CompatibleJField&)>;

// Projected-gradient descent with the Cayley retraction: Barzilai-Borwein
// trial steps safeguarded by Armijo backtracking, so e2 is strictly
// decreasing on every accepted step. Iterates are re-projected (polar) if
// constraint drift ever exceeds 1e-11.
MinimizeResult minimize(const CompatibleJField& j0, const MetricField& metric,
                        const OptimizerConfig& cfg, const IterCallback& on_iter = {},
                        const CheckpointCallback& on_checkpoint = {});

struct ConcentrationReport {
    std::vector<double> radii;
    std::vector<std::array<int, 4>> centers;
    std::vector<std::vector<double>> f_values;  // f_values[center][radius]
    struct Flag {
        std::size_t center_index;
        std::size_t radius_index;
        double value;
    };
    std::vector<Flag> flagged;  // pairs with F >= eps0
};

// F(r,p) = integral over the ball B_r(p) of |hess J|^2 + |grad J|^4, for p on
// a coarse sublattice (default stride n/8) and each requested radius.
ConcentrationReport concentration_scan(const CompatibleJField& j, const MetricField& metric,
                                       const std::vector<double>& radii, double eps0,
                                       int stride = 0);

struct SequenceReport {
    std::vector<OptStatus> statuses;
    std::vector<double> final_e2;
    std::vector<double> final_e1;
    std::vector<std::array<double, 6>> periods_start;
    std::vector<std::array<double, 6>> periods_end;
    std::vector<std::vector<double>> w12_distance;  // pairwise, final fields
    double empirical_inf = 0.0;                     // min final e2
};

// Minimize from each seed; report per-seed outcomes, Chern periods before and
// after (Euclidean metric; zeros otherwise), and pairwise W^{1,2} distances
// of the final fields.
SequenceReport sequence_experiment(const std::vector<CompatibleJField>& seeds,
                                   const MetricField& metric, const OptimizerConfig& cfg);

}  // namespace bhacs
