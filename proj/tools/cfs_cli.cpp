#include <array>
#include <chrono>
#include <filesystem>
#include <tuple>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cfs/action.hpp"
#include "cfs/geometry.hpp"
#include "cfs/gradient.hpp"
#include "cfs/io.hpp"
#include "cfs/optimize.hpp"
#include "cfs/oracles.hpp"

namespace {

using namespace cfs;

std::vector<std::uint64_t> expand_seeds(const std::vector<std::uint64_t>& seeds,
                                        std::uint64_t base, int count) {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out(count);
    for (int k = 0; k < count; ++k) out[k] = base + k;
    return out;
}

struct CommonOptions {
    int n = 1, f = 2, m = 2;
    std::vector<std::uint64_t> seeds;
    std::uint64_t seed_base = 1;
    int seed_count = 10;
    OptimizerSettings settings;
    std::string out = "result.json";
};

void add_shape_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--n", opt.n, "spin dimension");
    cmd->add_option("--f", opt.f, "Hilbert space dimension");
    cmd->add_option("--m", opt.m, "number of spacetime points");
}

void add_optimizer_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--seeds", opt.seeds, "explicit seed list");
    cmd->add_option("--seed", opt.seed_base, "base for sequential seeds");
    cmd->add_option("--mu0", opt.settings.mu0, "initial spectral scale override");
    cmd->add_option("--ftol", opt.settings.ftol, "objective-change tolerance");
    cmd->add_option("--gtol", opt.settings.gtol_stage2,
                    "stage-2 gradient tolerance (l1 norm)");
    cmd->add_option("--max-iters-1", opt.settings.max_iter_stage1, "stage-1 iteration cap");
    cmd->add_option("--max-iters-2", opt.settings.max_iter_stage2, "stage-2 iteration cap");
    cmd->add_option("--memory", opt.settings.memory, "L-BFGS history length");
    cmd->add_option("--out", opt.out, "output file");
}

int run_minimize(const CommonOptions& opt) {
    RunSpec spec;
    spec.shape = Shape{opt.n, opt.f, opt.m};
    if (spec.shape.f < 2 * spec.shape.n)
        throw UsageError("f must be at least 2n");
    spec.seeds = expand_seeds(opt.seeds, opt.seed_base, opt.seed_count);
    spec.settings = opt.settings;
    spec.output_path = opt.out;

    const auto start = std::chrono::steady_clock::now();
    const MultiRestartResult result = multi_restart(spec.shape, spec.seeds, spec.settings);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const ResultFile file = build_result_file(spec, result, wall);
    save_result(opt.out, file);
    std::cerr << "best S " << file.action << " T " << file.boundedness << " from "
              << result.all.size() << "/" << spec.seeds.size() << " seeds, " << wall
              << " s -> " << opt.out << '\n';
    return 0;
}

int run_oracle(const std::string& kind, const CommonOptions& opt, double tau_max) {
    if (kind == "iso") {
        std::ofstream out(opt.out);
        if (!out) throw Error("cannot write " + opt.out);
        out.precision(17);
        out << "tau tau2 lagrangian\n";
        const int grid = 40;
        for (int a = 0; a <= grid; ++a)
            for (int b = 0; b <= grid; ++b) {
                const double t1 = 1.0 + (tau_max - 1.0) * a / grid;
                const double t2 = 1.0 + (tau_max - 1.0) * b / grid;
                out << t1 << ' ' << t2 << ' ' << iso_lagrangian(t1, t2) << '\n';
            }
        std::cerr << "iso table (minimum 1/6 at tau = tau' = 1) -> " << opt.out << '\n';
        return 0;
    }

    Configuration config;
    OraclePrediction pred;
    std::string label;
    const std::uint64_t seed = opt.seeds.empty() ? opt.seed_base : opt.seeds.front();
    if (kind == "dirac2d") {
        std::tie(config, pred) = dirac2d_config(opt.m, seed);
        label = "2d Dirac sphere exact tau^2/(2m)";
    } else if (kind == "dirac4d") {
        std::tie(config, pred) = dirac4d_config(opt.m, seed);
        label = "4d Dirac sphere exact tau^2/(16m)";
    } else if (kind == "orthogonal") {
        config = orthogonal_min_config(opt.n, opt.f, opt.m);
        pred.action = 1.0 / (2.0 * opt.m * opt.n * opt.n * opt.n);
        pred.regime = Regime::Exact;
        label = "orthogonal-images floor 1/(2 m n^3)";
    } else {
        throw UsageError("unknown oracle kind: " + kind);
    }

    const ResultFile file = build_oracle_file(label, config, &pred);
    save_result(opt.out, file);
    std::cerr << "oracle " << kind << ": S " << file.action << " predicted " << pred.action
              << " delta " << file.action - pred.action << " -> " << opt.out << '\n';
    return 0;
}

int run_plot(const std::string& input, int ref_index, bool rescale, double exponent,
             const std::string& out_path) {
    const ResultFile file = load_result(input);
    if (file.spec.shape.n != 1)
        throw NotSpinOneError("projected plots are defined for n = 1 results");
    const Configuration config = config_from_result(file);
    const auto rows = plot_rows(config, ref_index, rescale, exponent);
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    write_plot_rows(out, rows);
    std::cerr << rows.size() << " plot rows -> " << out_path << '\n';
    return 0;
}

int run_check_grad(const CommonOptions& opt, double step) {
    const Shape shape{opt.n, opt.f, opt.m};
    const double mu0 =
        opt.settings.mu0 > 0 ? opt.settings.mu0 : default_mu0(shape.n, shape.m);
    const std::uint64_t seed = opt.seeds.empty() ? opt.seed_base : opt.seeds.front();
    const UnconstrainedParams params = init_random(shape, seed, 0.01, 0.01, mu0);
    const GradCheckReport report = fd_check(params, step);
    std::cout << "max_rel_error " << report.max_rel_error << " worst_index "
              << report.worst_index << " step " << report.step << " smooth "
              << (report.smooth ? "yes" : "no") << '\n';
    return 0;
}

int run_sweep(const std::vector<int>& ns, const std::vector<int>& fs,
              const std::vector<int>& ms, bool zip, const CommonOptions& opt,
              const std::string& out_dir) {
    if (ns.empty() || fs.empty() || ms.empty()) throw UsageError("sweep grid is empty");
    std::filesystem::create_directories(out_dir);

    std::vector<std::array<int, 3>> cells;
    if (zip) {
        if (fs.size() != ms.size())
            throw UsageError("--zip needs --f and --m lists of equal length");
        for (int n : ns)
            for (size_t k = 0; k < fs.size(); ++k) cells.push_back({n, fs[k], ms[k]});
    } else {
        for (int n : ns)
            for (int f : fs)
                for (int m : ms) cells.push_back({n, f, m});
    }

    std::ostringstream table;
    table.precision(12);
    table << "n f m best_S oracle_S ratio T\n";
    std::vector<double> slope_x, slope_y;
    for (const auto& cell : cells) {
        const auto [n, f, m] = std::tuple{cell[0], cell[1], cell[2]};
        try {
            RunSpec spec;
            spec.shape = Shape{n, f, m};
            spec.seeds = expand_seeds(opt.seeds, opt.seed_base, opt.seed_count);
            spec.settings = opt.settings;
            std::ostringstream name;
            name << out_dir << "/n" << n << "_f" << f << "_m" << m << ".json";
            spec.output_path = name.str();

            const auto start = std::chrono::steady_clock::now();
            const MultiRestartResult result =
                multi_restart(spec.shape, spec.seeds, spec.settings);
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            const ResultFile file = build_result_file(spec, result, wall);
            save_result(spec.output_path, file);

            double oracle = 0.0;
            if (!file.oracle_comparison.empty())
                oracle = file.oracle_comparison.front().predicted_action;
            table << n << ' ' << f << ' ' << m << ' ' << file.action << ' ' << oracle
                  << ' ' << (oracle > 0 ? file.action / oracle : 0.0) << ' '
                  << file.boundedness << '\n';
            slope_x.push_back(m);
            slope_y.push_back(file.action);
            std::cerr << "cell (" << n << "," << f << "," << m << ") S " << file.action
                      << '\n';
        } catch (const std::exception& e) {
            table << n << ' ' << f << ' ' << m << " failed: " << e.what() << '\n';
            std::cerr << "cell (" << n << "," << f << "," << m << ") failed: " << e.what()
                      << '\n';
        }
    }
    if (slope_y.size() >= 2) {
        const double slope = loglog_slope(slope_x, slope_y);
        table << "# loglog_slope_S_vs_m " << slope << '\n';
        std::cerr << "log-log slope of S vs m: " << slope << '\n';
    }
    std::ofstream out(out_dir + "/summary.txt");
    out << table.str();
    std::cout << table.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal action minimization for weighted counting measures"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string oracle_kind = "dirac2d";
    double tau_max = 4.0;
    std::string plot_input = "result.json", plot_out = "plot.txt";
    int ref_index = 0;
    bool rescale = false;
    double exponent = 1.5;
    double step = 1e-5;
    std::vector<int> sweep_n{1}, sweep_f, sweep_m;
    bool zip = false;
    std::string out_dir = "sweep";

    auto* minimize = app.add_subcommand("minimize", "two-stage quasi-Newton minimization");
    add_shape_flags(minimize, opt);
    add_optimizer_flags(minimize, opt);

    auto* oracle = app.add_subcommand("oracle", "analytic reference configurations");
    oracle->add_option("--kind", oracle_kind, "dirac2d | dirac4d | orthogonal | iso");
    add_shape_flags(oracle, opt);
    oracle->add_option("--seed", opt.seed_base, "construction seed");
    oracle->add_option("--tau-max", tau_max, "grid limit for the iso table");
    oracle->add_option("--out", opt.out, "output file");

    auto* plot = app.add_subcommand("plot", "projected spacetime plot data");
    plot->add_option("--in", plot_input, "result file");
    plot->add_option("--ref-index", ref_index, "reference point index");
    plot->add_flag("--rescale", rescale, "divide by |hat_y0|^exponent");
    plot->add_option("--exponent", exponent, "rescaling exponent");
    plot->add_option("--out", plot_out, "output file");

    auto* check = app.add_subcommand("check-grad", "finite-difference gradient check");
    add_shape_flags(check, opt);
    check->add_option("--seed", opt.seed_base, "parameter seed");
    check->add_option("--step", step, "central-difference step");
    check->add_option("--mu0", opt.settings.mu0, "initial spectral scale override");

    auto* sweep = app.add_subcommand("sweep", "grid of minimizations with scaling fit");
    sweep->add_option("--n", sweep_n, "spin dimensions");
    sweep->add_option("--f", sweep_f, "Hilbert dimensions");
    sweep->add_option("--m", sweep_m, "point counts");
    sweep->add_flag("--zip", zip, "pair --f and --m elementwise instead of crossing");
    add_optimizer_flags(sweep, opt);
    sweep->add_option("--out-dir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (minimize->parsed()) return run_minimize(opt);
        if (oracle->parsed()) return run_oracle(oracle_kind, opt, tau_max);
        if (plot->parsed()) return run_plot(plot_input, ref_index, rescale, exponent, plot_out);
        if (check->parsed()) return run_check_grad(opt, step);
        if (sweep->parsed()) return run_sweep(sweep_n, sweep_f, sweep_m, zip, opt, out_dir);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const cfs::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
