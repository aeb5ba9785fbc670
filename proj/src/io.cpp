#include "cfs/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "json.hpp"

#include "cfs/action.hpp"

namespace cfs {

using json = nlohmann::json;

namespace {

json vector_to_json(const VectorR& v) {
    json arr = json::array();
    for (int k = 0; k < v.size(); ++k) arr.push_back(v[k]);
    return arr;
}

VectorR vector_from_json(const json& arr) {
    VectorR v(arr.size());
    for (size_t k = 0; k < arr.size(); ++k) v[k] = arr[k].get<double>();
    return v;
}

// Complex matrices as parallel real/imag arrays, row-major.
json matrix_to_json(const MatrixC& m) {
    json re = json::array(), im = json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"real", re}, {"imag", im}};
}

MatrixC matrix_from_json(const json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    MatrixC m(rows, cols);
    const json& re = j.at("real");
    const json& im = j.at("imag");
    if (static_cast<int>(re.size()) != rows * cols || re.size() != im.size())
        throw Error("matrix arrays have inconsistent sizes");
    int at = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c, ++at)
            m(r, c) = Complex(re[at].get<double>(), im[at].get<double>());
    return m;
}

json settings_to_json(const OptimizerSettings& s) {
    return json{{"ftol", s.ftol},
                {"gtol_stage1", s.gtol_stage1},
                {"gtol_stage2", s.gtol_stage2},
                {"memory", s.memory},
                {"max_linesearch", s.max_linesearch},
                {"max_iter_stage1", s.max_iter_stage1},
                {"max_iter_stage2", s.max_iter_stage2},
                {"wall_clock_seconds", s.wall_clock_seconds},
                {"mu0", s.mu0}};
}

OptimizerSettings settings_from_json(const json& j) {
    OptimizerSettings s;
    s.ftol = j.at("ftol").get<double>();
    s.gtol_stage1 = j.at("gtol_stage1").get<double>();
    s.gtol_stage2 = j.at("gtol_stage2").get<double>();
    s.memory = j.at("memory").get<int>();
    s.max_linesearch = j.at("max_linesearch").get<int>();
    s.max_iter_stage1 = j.at("max_iter_stage1").get<int>();
    s.max_iter_stage2 = j.at("max_iter_stage2").get<int>();
    s.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    s.mu0 = j.at("mu0").get<double>();
    return s;
}

json run_to_json(const RunResult& r, bool with_trace) {
    json j{{"seed", r.seed},
           {"final_action", r.final_action},
           {"final_boundedness", r.final_boundedness},
           {"iterations_stage1", r.iterations_stage1},
           {"iterations_stage2", r.iterations_stage2},
           {"termination", to_string(r.termination)},
           {"final_params", vector_to_json(r.final_params)}};
    if (with_trace) j["action_trace"] = r.action_trace;
    return j;
}

Termination termination_from_string(const std::string& s) {
    for (Termination t : {Termination::FtolReached, Termination::GtolReached,
                          Termination::MaxIter, Termination::WallClock,
                          Termination::LineSearchFailure})
        if (s == to_string(t)) return t;
    throw Error("unknown termination reason: " + s);
}

RunResult run_from_json(const json& j, const Shape& shape) {
    RunResult r;
    r.shape = shape;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.final_action = j.at("final_action").get<double>();
    r.final_boundedness = j.at("final_boundedness").get<double>();
    r.iterations_stage1 = j.at("iterations_stage1").get<int>();
    r.iterations_stage2 = j.at("iterations_stage2").get<int>();
    r.termination = termination_from_string(j.at("termination").get<std::string>());
    r.final_params = vector_from_json(j.at("final_params"));
    if (j.contains("action_trace"))
        r.action_trace = j.at("action_trace").get<std::vector<double>>();
    return r;
}

std::string now_iso8601() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

void attach_snapshot(ResultFile& file, const Configuration& config) {
    file.weights = config.weights;
    file.matrices.clear();
    for (const auto& p : config.points) file.matrices.push_back(p.matrix);

    const ActionReport report = causal_action(config);
    file.action = report.action;
    file.boundedness = report.boundedness;
    file.class_counts = {{"spacelike", 0}, {"timelike", 0}, {"lightlike", 0}};
    for (int i = 0; i < config.size(); ++i)
        for (int j = i; j < config.size(); ++j)
            ++file.class_counts[to_string(report.class_matrix[i][j])];
}

}  // namespace

ResultFile build_result_file(const RunSpec& spec, const MultiRestartResult& result,
                             double wall_seconds) {
    ResultFile file;
    file.origin = "minimize";
    file.spec = spec;
    file.runs = result.all;
    file.failures = result.failures;
    for (size_t k = 0; k < result.all.size(); ++k)
        if (result.all[k].seed == result.best.seed) file.best_index = static_cast<int>(k);

    const Configuration best =
        decode(UnconstrainedParams::unpack(result.best.final_params, spec.shape));
    attach_snapshot(file, best);

    for (const auto& row : asymptotic_table(spec.shape.n, spec.shape.f, spec.shape.m)) {
        ResultFile::OracleDelta delta;
        delta.label = row.label;
        delta.predicted_action = row.prediction.action;
        delta.delta = file.action - row.prediction.action;
        delta.regime = row.prediction.regime == Regime::Exact ? "exact" : "asymptotic";
        file.oracle_comparison.push_back(std::move(delta));
    }
    file.wall_seconds = wall_seconds;
    file.timestamp = now_iso8601();
    return file;
}

ResultFile build_oracle_file(const std::string& label, const Configuration& config,
                             const OraclePrediction* prediction) {
    ResultFile file;
    file.origin = "oracle";
    file.spec.shape = Shape{config.n(), config.f(), config.size()};
    attach_snapshot(file, config);
    if (prediction) {
        ResultFile::OracleDelta delta;
        delta.label = label;
        delta.predicted_action = prediction->action;
        delta.delta = file.action - prediction->action;
        delta.regime = prediction->regime == Regime::Exact ? "exact" : "asymptotic";
        file.oracle_comparison.push_back(std::move(delta));
    }
    file.timestamp = now_iso8601();
    return file;
}

void save_result(const std::string& path, const ResultFile& file) {
    json j;
    j["origin"] = file.origin;
    j["spec"] = json{{"n", file.spec.shape.n},
                     {"f", file.spec.shape.f},
                     {"m", file.spec.shape.m},
                     {"seeds", file.spec.seeds},
                     {"settings", settings_to_json(file.spec.settings)},
                     {"output_path", file.spec.output_path},
                     {"export_trace", file.spec.export_trace}};
    json runs = json::array();
    for (const auto& r : file.runs) runs.push_back(run_to_json(r, file.spec.export_trace));
    j["runs"] = runs;
    j["failures"] = file.failures;
    j["best_index"] = file.best_index;

    json mats = json::array();
    for (const auto& m : file.matrices) mats.push_back(matrix_to_json(m));
    j["configuration"] = json{{"matrices", mats}, {"weights", vector_to_json(file.weights)}};
    j["action"] = file.action;
    j["boundedness"] = file.boundedness;
    j["class_counts"] = file.class_counts;

    json oracle = json::array();
    for (const auto& d : file.oracle_comparison)
        oracle.push_back(json{{"label", d.label},
                              {"predicted_action", d.predicted_action},
                              {"delta", d.delta},
                              {"regime", d.regime}});
    j["oracle_comparison"] = oracle;
    j["tool_version"] = file.tool_version;
    j["wall_seconds"] = file.wall_seconds;
    j["timestamp"] = file.timestamp;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

ResultFile load_result(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    json j;
    in >> j;

    ResultFile file;
    file.origin = j.at("origin").get<std::string>();
    const json& spec = j.at("spec");
    file.spec.shape = Shape{spec.at("n").get<int>(), spec.at("f").get<int>(),
                            spec.at("m").get<int>()};
    file.spec.seeds = spec.at("seeds").get<std::vector<std::uint64_t>>();
    file.spec.settings = settings_from_json(spec.at("settings"));
    file.spec.output_path = spec.at("output_path").get<std::string>();
    file.spec.export_trace = spec.at("export_trace").get<bool>();

    for (const auto& r : j.at("runs")) file.runs.push_back(run_from_json(r, file.spec.shape));
    file.failures = j.at("failures").get<std::vector<std::string>>();
    file.best_index = j.at("best_index").get<int>();

    const json& config = j.at("configuration");
    for (const auto& m : config.at("matrices")) file.matrices.push_back(matrix_from_json(m));
    file.weights = vector_from_json(config.at("weights"));
    file.action = j.at("action").get<double>();
    file.boundedness = j.at("boundedness").get<double>();
    file.class_counts = j.at("class_counts").get<std::map<std::string, int>>();

    for (const auto& d : j.at("oracle_comparison")) {
        ResultFile::OracleDelta delta;
        delta.label = d.at("label").get<std::string>();
        delta.predicted_action = d.at("predicted_action").get<double>();
        delta.delta = d.at("delta").get<double>();
        delta.regime = d.at("regime").get<std::string>();
        file.oracle_comparison.push_back(std::move(delta));
    }
    file.tool_version = j.at("tool_version").get<std::string>();
    file.wall_seconds = j.at("wall_seconds").get<double>();
    file.timestamp = j.at("timestamp").get<std::string>();
    return file;
}

Configuration config_from_result(const ResultFile& file) {
    Configuration config;
    config.weights = file.weights;
    for (const auto& m : file.matrices)
        config.points.push_back(validate_point(m, file.spec.shape.n));
    config.validate();
    return config;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw Error("loglog_slope needs two or more samples");
    const int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
        const double lx = std::log(xs[k]);
        const double ly = std::log(ys[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cfs
