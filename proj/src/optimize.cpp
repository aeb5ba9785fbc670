#include "cfs/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <ostream>
#include <thread>

#include "cfs/action.hpp"
#include "cfs/gradient.hpp"

namespace cfs {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::FtolReached: return "ftol";
        case Termination::GtolReached: return "gtol";
        case Termination::MaxIter: return "max-iterations";
        case Termination::WallClock: return "wall-clock";
        case Termination::LineSearchFailure: return "line-search-failure";
    }
    return "?";
}

double gradient_norm(const VectorR& g, GradNorm norm) {
    switch (norm) {
        case GradNorm::L1: return g.lpNorm<1>();
        case GradNorm::L2: return g.norm();
        case GradNorm::LInf: return g.lpNorm<Eigen::Infinity>();
    }
    return g.lpNorm<1>();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Eval {
    double value = kInf;
    VectorR grad;
};

// Best point seen that at least satisfies sufficient decrease; returned when
// the curvature condition is unattainable (kinks make that a normal outcome).
void note_armijo(LineSearchResult& best, double f0, double dphi0, double c1, double alpha,
                 double f, const VectorR& point, const VectorR& g) {
    if (f <= f0 + c1 * alpha * dphi0 && (!best.success || f < best.value)) {
        best.success = true;
        best.step = alpha;
        best.value = f;
        best.point = point;
        best.grad = g;
    }
}

// Interpolating zoom phase (bisection fallback keeps it robust near kinks).
LineSearchResult zoom(const Objective& objective, const VectorR& x, double f0, double dphi0,
                      const VectorR& direction, double lo, double f_lo, double dphi_lo,
                      double hi, double f_hi, int& budget, const OptimizerSettings& st,
                      LineSearchResult& best) {
    LineSearchResult out;
    VectorR g(x.size());
    while (budget > 0) {
        --budget;
        // Quadratic interpolation using (lo, f_lo, dphi_lo) and (hi, f_hi);
        // fall back to the midpoint when it lands outside the bracket.
        double alpha = lo - 0.5 * dphi_lo * (hi - lo) * (hi - lo) /
                                (f_hi - f_lo - dphi_lo * (hi - lo));
        const double span = std::abs(hi - lo);
        if (!std::isfinite(alpha) || alpha <= std::min(lo, hi) + 0.1 * span ||
            alpha >= std::max(lo, hi) - 0.1 * span)
            alpha = 0.5 * (lo + hi);

        const double f = objective(x + alpha * direction, g);
        note_armijo(best, f0, dphi0, st.c1, alpha, f, x + alpha * direction, g);
        if (f > f0 + st.c1 * alpha * dphi0 || f >= f_lo) {
            hi = alpha;
            f_hi = f;
        } else {
            const double dphi = g.dot(direction);
            if (std::abs(dphi) <= -st.c2 * dphi0) {
                out.success = true;
                out.step = alpha;
                out.value = f;
                out.point = x + alpha * direction;
                out.grad = g;
                return out;
            }
            if (dphi * (hi - lo) >= 0) {
                hi = lo;
                f_hi = f_lo;
            }
            lo = alpha;
            f_lo = f;
            dphi_lo = dphi;
        }
        if (std::abs(hi - lo) < 1e-16) break;
    }
    return out;
}

}  // namespace

LineSearchResult line_search_strong_wolfe(const Objective& objective, const VectorR& x,
                                          double value, const VectorR& grad,
                                          const VectorR& direction,
                                          const OptimizerSettings& settings) {
    const double dphi0 = grad.dot(direction);
    LineSearchResult out;
    if (!(dphi0 < 0)) return out;  // caller resets to steepest descent first

    int budget = settings.max_linesearch;
    double prev = 0.0, f_prev = value, dphi_prev = dphi0;
    double alpha = 1.0;
    VectorR g(x.size());
    LineSearchResult best;  // sufficient-decrease fallback

    while (budget > 0) {
        --budget;
        const double f = objective(x + alpha * direction, g);
        note_armijo(best, value, dphi0, settings.c1, alpha, f, x + alpha * direction, g);
        if (f > value + settings.c1 * alpha * dphi0 || (prev > 0.0 && f >= f_prev)) {
            out = zoom(objective, x, value, dphi0, direction, prev, f_prev, dphi_prev,
                       alpha, f, budget, settings, best);
            return out.success ? out : best;
        }
        const double dphi = g.dot(direction);
        if (std::abs(dphi) <= -settings.c2 * dphi0) {
            out.success = true;
            out.step = alpha;
            out.value = f;
            out.point = x + alpha * direction;
            out.grad = g;
            return out;
        }
        if (dphi >= 0) {
            out = zoom(objective, x, value, dphi0, direction, alpha, f, dphi,
                       prev, f_prev, budget, settings, best);
            return out.success ? out : best;
        }
        prev = alpha;
        f_prev = f;
        dphi_prev = dphi;
        alpha *= 2.0;
    }
    return best;
}

VectorR two_loop_direction(const VectorR& g, const std::vector<VectorR>& s_hist,
                           const std::vector<VectorR>& y_hist) {
    const int k = static_cast<int>(s_hist.size());
    if (k == 0) return -g;

    std::vector<double> rho(k), alpha(k);
    for (int i = 0; i < k; ++i) rho[i] = 1.0 / y_hist[i].dot(s_hist[i]);

    VectorR q = g;
    for (int i = k - 1; i >= 0; --i) {
        alpha[i] = rho[i] * s_hist[i].dot(q);
        q -= alpha[i] * y_hist[i];
    }
    const double gamma = s_hist[k - 1].dot(y_hist[k - 1]) / y_hist[k - 1].squaredNorm();
    VectorR r = gamma * q;
    for (int i = 0; i < k; ++i) {
        const double beta = rho[i] * y_hist[i].dot(r);
        r += (alpha[i] - beta) * s_hist[i];
    }
    return -r;
}

namespace {

// Shared outer loop for both quasi-Newton stages; `direction` computes the
// step proposal from the current gradient, `update` absorbs an accepted
// (s, y) pair, `reset` discards curvature state after a steepest-descent
// restart. Stopping order after each accepted step: ftol, then gtol, then
// the iteration cap.
RunResult quasi_newton_loop(const Objective& objective, const VectorR& x0,
                            const OptimizerSettings& settings, double gtol, int max_iter,
                            const char* stage_name,
                            const std::function<VectorR(const VectorR&)>& direction,
                            const std::function<void(const VectorR&, const VectorR&)>& update,
                            const std::function<void()>& reset) {
    const auto start = std::chrono::steady_clock::now();
    auto seconds_spent = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    RunResult result;
    VectorR x = x0;
    VectorR g(x.size());
    double f = objective(x, g);
    if (!std::isfinite(f)) throw NonFiniteError("objective not finite at the starting point");
    result.action_trace.push_back(f);

    result.termination = Termination::MaxIter;
    if (gradient_norm(g, settings.grad_norm) < gtol) {
        result.termination = Termination::GtolReached;
        max_iter = 0;
    }

    int iter = 0;
    while (iter < max_iter) {
        if (seconds_spent() > settings.wall_clock_seconds) {
            result.termination = Termination::WallClock;
            break;
        }
        VectorR d = direction(g);
        if (!(d.dot(g) < 0)) {  // not a descent direction: restart
            d = -g;
            reset();
        }
        LineSearchResult ls = line_search_strong_wolfe(objective, x, f, g, d, settings);
        if (!ls.success) {
            result.termination = Termination::LineSearchFailure;
            break;
        }

        const VectorR s = ls.point - x;
        const VectorR y = ls.grad - g;
        if (s.dot(y) > 1e-12 * s.norm() * y.norm()) update(s, y);

        const double change = f - ls.value;
        const double rel = change / std::max({std::abs(f), std::abs(ls.value), 1.0});
        x = ls.point;
        f = ls.value;
        g = ls.grad;
        ++iter;
        if (iter % settings.trace_every == 0) result.action_trace.push_back(f);
        if (settings.log && iter % settings.log_every == 0)
            (*settings.log) << stage_name << " iter " << iter << " S " << f << " |g|1 "
                            << g.lpNorm<1>() << '\n';

        if (change < settings.ftol || rel < settings.ftol) {
            result.termination = Termination::FtolReached;
            break;
        }
        if (gradient_norm(g, settings.grad_norm) < gtol) {
            result.termination = Termination::GtolReached;
            break;
        }
    }

    result.final_params = x;
    result.final_action = f;
    result.iterations_stage1 = iter;
    if (result.action_trace.empty() || result.action_trace.back() != f)
        result.action_trace.push_back(f);
    return result;
}

}  // namespace

RunResult lbfgs(const Objective& objective, const VectorR& x0,
                const OptimizerSettings& settings) {
    std::deque<VectorR> s_hist, y_hist;
    auto direction = [&](const VectorR& g) {
        return two_loop_direction(g, {s_hist.begin(), s_hist.end()},
                                  {y_hist.begin(), y_hist.end()});
    };
    auto update = [&](const VectorR& s, const VectorR& y) {
        s_hist.push_back(s);
        y_hist.push_back(y);
        if (static_cast<int>(s_hist.size()) > settings.memory) {
            s_hist.pop_front();
            y_hist.pop_front();
        }
    };
    auto reset = [&] {
        s_hist.clear();
        y_hist.clear();
    };
    return quasi_newton_loop(objective, x0, settings, settings.gtol_stage1,
                             settings.max_iter_stage1, "lbfgs", direction, update, reset);
}

RunResult bfgs(const Objective& objective, const VectorR& x0,
               const OptimizerSettings& settings) {
    const int dim = static_cast<int>(x0.size());
    Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(dim, dim);
    bool first = true;
    auto direction = [&](const VectorR& g) -> VectorR { return -(h_inv * g); };
    auto update = [&](const VectorR& s, const VectorR& y) {
        const double sy = s.dot(y);
        if (first) {  // standard scaling before the first update
            h_inv *= sy / y.squaredNorm();
            first = false;
        }
        const double rho = 1.0 / sy;
        const VectorR hy = h_inv * y;
        // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
        h_inv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
                 rho * (hy * s.transpose() + s * hy.transpose());
    };
    auto reset = [&] {
        h_inv.setIdentity();
        first = true;
    };
    RunResult r = quasi_newton_loop(objective, x0, settings, settings.gtol_stage2,
                                    settings.max_iter_stage2, "bfgs", direction, update, reset);
    r.iterations_stage2 = r.iterations_stage1;
    r.iterations_stage1 = 0;
    return r;
}

namespace {

// Wraps the action gradient as an Objective; decode failures at trial points
// surface as +inf so the line search backs away from them.
Objective action_objective(const Shape& shape) {
    return [shape](const VectorR& x, VectorR& g) -> double {
        try {
            ActionGradient ag = grad_flat(x, shape);
            g = ag.grad;
            return ag.action;
        } catch (const DegenerateTraceError&) {
            g.setZero(x.size());
            return kInf;
        } catch (const NonFiniteError&) {
            g.setZero(x.size());
            return kInf;
        }
    };
}

std::uint64_t mix_seed(std::uint64_t seed, int attempt) {
    return seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(attempt);
}

}  // namespace

RunResult minimize_two_stage(const Shape& shape, std::uint64_t seed,
                             const OptimizerSettings& settings) {
    const double mu0 = settings.mu0 > 0 ? settings.mu0 : default_mu0(shape.n, shape.m);

    // Draw until the start decodes (the trace normalization can degenerate).
    UnconstrainedParams params;
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
        params = init_random(shape, mix_seed(seed, attempt), settings.sigma_c,
                             settings.sigma_mu, mu0);
        try {
            decode(params);
            ok = true;
        } catch (const DegenerateTraceError&) {
        }
    }
    if (!ok) throw DegenerateTraceError("no decodable random start after 100 attempts");

    const Objective objective = action_objective(shape);
    RunResult stage1 = lbfgs(objective, params.pack(), settings);
    RunResult stage2 = bfgs(objective, stage1.final_params, settings);

    RunResult result = stage2;
    result.shape = shape;
    result.seed = seed;
    result.iterations_stage1 = stage1.iterations_stage1;
    result.action_trace = stage1.action_trace;
    result.action_trace.insert(result.action_trace.end(), stage2.action_trace.begin(),
                               stage2.action_trace.end());

    const ActionReport report =
        causal_action(decode(UnconstrainedParams::unpack(result.final_params, shape)));
    result.final_action = report.action;
    result.final_boundedness = report.boundedness;
    return result;
}

MultiRestartResult multi_restart(const Shape& shape, const std::vector<std::uint64_t>& seeds,
                                 const OptimizerSettings& settings) {
    if (seeds.empty()) throw Error("multi_restart needs at least one seed");

    int threads = 0;
    if (const char* env = std::getenv("CFS_THREADS")) threads = std::atoi(env);
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));

    const int count = static_cast<int>(seeds.size());
    std::vector<RunResult> results(count);
    std::vector<std::string> errors(count);
    std::vector<char> failed(count, 0);

    auto worker = [&](int first, int stride) {
        for (int k = first; k < count; k += stride) {
            try {
                results[k] = minimize_two_stage(shape, seeds[k], settings);
            } catch (const std::exception& e) {
                failed[k] = 1;
                errors[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t, threads);
    worker(0, threads);
    for (auto& t : pool) t.join();

    MultiRestartResult out;
    int best = -1;
    for (int k = 0; k < count; ++k) {
        if (failed[k]) {
            out.failures.push_back("seed " + std::to_string(seeds[k]) + ": " + errors[k]);
            continue;
        }
        out.all.push_back(results[k]);
        if (best < 0 || results[k].final_action < results[best].final_action) best = k;
    }
    if (best < 0) throw Error("all restarts failed: " + out.failures.front());
    out.best = results[best];
    return out;
}

}  // namespace cfs
