#ifndef CFS_OPTIMIZE_HPP
#define CFS_OPTIMIZE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cfs/parametrize.hpp"

namespace cfs {

/// Evaluates the objective and writes its gradient; returning +inf marks the
/// point as infeasible (the line search backs off).
using Objective = std::function<double(const VectorR& x, VectorR& grad_out)>;

enum class GradNorm { L1, L2, LInf };
enum class Termination { FtolReached, GtolReached, MaxIter, WallClock, LineSearchFailure };

const char* to_string(Termination t);

struct OptimizerSettings {
    double ftol = 1e-7;            // absolute or relative objective change
    double gtol_stage1 = 1e-9;     // gradient-norm threshold, first stage
    double gtol_stage2 = 1e-7;     // and second stage
    int memory = 70;               // L-BFGS history length
    int max_linesearch = 20;       // objective evaluations per line search
    int max_iter_stage1 = 10000;
    int max_iter_stage2 = 5000;
    double wall_clock_seconds = 72.0 * 3600.0;
    double c1 = 1e-4;              // sufficient decrease
    double c2 = 0.9;               // curvature
    GradNorm grad_norm = GradNorm::L1;
    double sigma_c = 0.01;         // initialization spreads
    double sigma_mu = 0.01;
    double mu0 = -1.0;             // <= 0: use default_mu0(n, m)
    std::ostream* log = nullptr;   // optional progress stream
    int log_every = 100;
    int trace_every = 10;          // action_trace sampling stride
};

struct RunResult {
    VectorR final_params;
    Shape shape;
    double final_action = 0.0;
    double final_boundedness = 0.0;
    int iterations_stage1 = 0;
    int iterations_stage2 = 0;
    Termination termination = Termination::MaxIter;
    std::vector<double> action_trace;
    std::uint64_t seed = 0;
};

double gradient_norm(const VectorR& g, GradNorm norm);

struct LineSearchResult {
    bool success = false;
    double step = 0.0;
    double value = 0.0;
    VectorR point;
    VectorR grad;
};

/// Strong Wolfe line search (bracket + zoom). `value`/`grad` describe the
/// starting point; a non-descent direction is replaced by steepest descent
/// by the callers, not here.
LineSearchResult line_search_strong_wolfe(const Objective& objective, const VectorR& x,
                                          double value, const VectorR& grad,
                                          const VectorR& direction,
                                          const OptimizerSettings& settings);

/// One L-BFGS two-loop recursion: the quasi-Newton step -H g from the stored
/// (s, y) pairs, scaled by gamma = (s.y)/(y.y) of the latest pair. Exposed so
/// the direction computation can be tested against dense BFGS.
VectorR two_loop_direction(const VectorR& g, const std::vector<VectorR>& s_hist,
                           const std::vector<VectorR>& y_hist);

RunResult lbfgs(const Objective& objective, const VectorR& x0,
                const OptimizerSettings& settings);
RunResult bfgs(const Objective& objective, const VectorR& x0,
               const OptimizerSettings& settings);

/// Random start, L-BFGS stage with gtol_stage1, then BFGS from the resulting
/// point with gtol_stage2. Deterministic for a fixed seed and platform.
RunResult minimize_two_stage(const Shape& shape, std::uint64_t seed,
                             const OptimizerSettings& settings = {});

struct MultiRestartResult {
    RunResult best;
    std::vector<RunResult> all;                // successful runs, seed order
    std::vector<std::string> failures;         // messages of failed seeds
};

/// Runs minimize_two_stage per seed, in parallel (thread count from the
/// CFS_THREADS environment variable, default hardware concurrency), and
/// returns the run with the smallest final action. Throws only if every
/// seed fails.
MultiRestartResult multi_restart(const Shape& shape, const std::vector<std::uint64_t>& seeds,
                                 const OptimizerSettings& settings = {});

}  // namespace cfs

#endif  // CFS_OPTIMIZE_HPP
