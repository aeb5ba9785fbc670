#ifndef CFS_IO_HPP
#define CFS_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "cfs/operators.hpp"
#include "cfs/optimize.hpp"
#include "cfs/oracles.hpp"

namespace cfs {

inline constexpr const char* kToolVersion = "cfs 1.0.0";

/// Everything needed to reproduce a minimization run.
struct RunSpec {
    Shape shape;
    std::vector<std::uint64_t> seeds;
    OptimizerSettings settings;
    std::string output_path;
    bool export_trace = true;
};

/// Self-describing result document; saved as JSON with sorted keys so that
/// load -> save round-trips byte-identically apart from the timestamp.
struct ResultFile {
    std::string origin = "minimize";  // "minimize" | "oracle"
    RunSpec spec;
    std::vector<RunResult> runs;      // successful runs, seed order
    std::vector<std::string> failures;
    int best_index = -1;

    // Snapshot of the best configuration.
    std::vector<MatrixC> matrices;
    VectorR weights;
    double action = 0.0;
    double boundedness = 0.0;
    std::map<std::string, int> class_counts;  // upper triangle incl. diagonal

    struct OracleDelta {
        std::string label;
        double predicted_action = 0.0;
        double delta = 0.0;  // action - predicted
        std::string regime;
    };
    std::vector<OracleDelta> oracle_comparison;

    std::string tool_version = kToolVersion;
    double wall_seconds = 0.0;
    std::string timestamp;
};

/// Assembles a result document from a finished multi-restart run, including
/// the class-count summary and the applicable oracle comparisons.
ResultFile build_result_file(const RunSpec& spec, const MultiRestartResult& result,
                             double wall_seconds);

/// Wraps an oracle configuration in the same document schema (origin
/// "oracle", no optimizer runs).
ResultFile build_oracle_file(const std::string& label, const Configuration& config,
                             const OraclePrediction* prediction);

void save_result(const std::string& path, const ResultFile& file);
ResultFile load_result(const std::string& path);

/// Reconstructs the stored best configuration through full validation.
Configuration config_from_result(const ResultFile& file);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace cfs

#endif  // CFS_IO_HPP
