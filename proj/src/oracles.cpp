#include "cfs/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfs/action.hpp"
#include "cfs/rng.hpp"

namespace cfs {

namespace {

double min_pairwise_angle(const std::vector<VectorR>& pts) {
    double best = M_PI;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            const double c = std::clamp(pts[i].dot(pts[j]), -1.0, 1.0);
            best = std::min(best, std::acos(c));
        }
    return best;
}

std::vector<VectorR> random_sphere(int m, int dim, Rng& rng) {
    std::vector<VectorR> pts(m);
    for (auto& p : pts) {
        p.resize(dim);
        do {
            for (int k = 0; k < dim; ++k) p[k] = rng.normal();
        } while (p.norm() < 1e-8);
        p.normalize();
    }
    return pts;
}

// Evenly wound spiral on S^2, a reliable warm start for the first restart.
std::vector<VectorR> fibonacci_sphere(int m) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    std::vector<VectorR> pts(m);
    for (int i = 0; i < m; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / m;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts[i].resize(3);
        pts[i] << r * std::cos(phi), r * std::sin(phi), z;
    }
    return pts;
}

// Inverse-power repulsion sweep: each point moves a fixed arc step along the
// tangential component of the net force. Returns the applied step size.
void repulsion_sweep(std::vector<VectorR>& pts, double exponent, double step) {
    const int m = static_cast<int>(pts.size());
    const int dim = static_cast<int>(pts.front().size());
    std::vector<VectorR> force(m, VectorR::Zero(dim));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const VectorR diff = pts[i] - pts[j];
            const double dist = std::max(diff.norm(), 1e-12);
            const VectorR f = diff / std::pow(dist, exponent + 1.0);
            force[i] += f;
            force[j] -= f;
        }
    for (int i = 0; i < m; ++i) {
        VectorR tangent = force[i] - pts[i].dot(force[i]) * pts[i];
        const double len = tangent.norm();
        if (len < 1e-14) continue;
        pts[i] = (pts[i] + step * (tangent / len)).normalized();
    }
}

// Max-min polish: push every point directly away from neighbors that sit
// within a small margin of the current minimal angle.
bool polish_sweep(std::vector<VectorR>& pts, double step) {
    const int m = static_cast<int>(pts.size());
    const int dim = static_cast<int>(pts.front().size());
    const double theta_min = min_pairwise_angle(pts);
    const double margin = std::max(4.0 * step, 1e-9);

    std::vector<VectorR> push(m, VectorR::Zero(dim));
    bool any = false;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double c = std::clamp(pts[i].dot(pts[j]), -1.0, 1.0);
            if (std::acos(c) > theta_min + margin) continue;
            VectorR away = pts[i] - c * pts[j];
            const double len = away.norm();
            if (len >= 1e-14) push[i] += away / len;
            VectorR away_j = pts[j] - c * pts[i];
            const double len_j = away_j.norm();
            if (len_j >= 1e-14) push[j] += away_j / len_j;
            any = true;
        }
    if (!any) return false;
    for (int i = 0; i < m; ++i) {
        VectorR tangent = push[i] - pts[i].dot(push[i]) * pts[i];
        const double len = tangent.norm();
        if (len < 1e-14) continue;
        pts[i] = (pts[i] + step * (tangent / len)).normalized();
    }
    return true;
}

}  // namespace

double iso_lagrangian(double tau, double tau2) {
    if (tau < 1.0 || tau2 < 1.0) throw TauBelowOneError("iso_lagrangian needs tau, tau2 >= 1");
    const double a = tau * tau - 1.0, b = tau2 * tau2 - 1.0;
    return std::pow(a, 1.5) * std::pow(b, 1.5) / (12.0 * tau * tau2) -
           tau * tau * tau2 * tau2 / 12.0 + (tau * tau + tau2 * tau2) / 8.0;
}

SpherePoints tammes_points(int m, int d, std::uint64_t seed) {
    if (m < 2) throw Error("tammes_points needs m >= 2");
    if (d != 2 && d != 4) throw Error("tammes_points supports d = 2 or d = 4");
    const int dim = d + 1;

    SpherePoints best;
    best.min_angle = -1.0;

    for (int restart = 0; restart < 5; ++restart) {
        Rng rng(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(restart));
        std::vector<VectorR> pts = (restart == 0 && d == 2)
                                       ? fibonacci_sphere(m)
                                       : random_sphere(m, dim, rng);

        // Spread with progressively harder repulsion, shrinking arc steps.
        const double base_step = 0.5 / std::pow(static_cast<double>(m), 1.0 / d);
        for (double exponent : {1.0, 4.0, 9.0}) {
            double step = base_step;
            for (int it = 0; it < 300; ++it) {
                repulsion_sweep(pts, exponent, step);
                step *= 0.985;
            }
        }

        // Max-min ascent with stall-driven step decay; stop once further
        // gains fall below 1e-6.
        double step = 0.05 * std::max(min_pairwise_angle(pts), 1e-3);
        std::vector<VectorR> local_best = pts;
        double local_angle = min_pairwise_angle(pts);
        int stall = 0;
        for (int it = 0; it < 6000 && step > 1e-9; ++it) {
            if (!polish_sweep(pts, step)) break;
            const double angle = min_pairwise_angle(pts);
            if (angle > local_angle + 1e-12) {
                if (angle - local_angle < 1e-6 && step < 1e-6) {
                    local_angle = angle;
                    local_best = pts;
                    break;
                }
                local_angle = angle;
                local_best = pts;
                stall = 0;
            } else if (++stall >= 20) {
                pts = local_best;
                step *= 0.5;
                stall = 0;
            }
        }

        if (local_angle > best.min_angle) {
            best.points = local_best;
            best.min_angle = local_angle;
        }
    }
    return best;
}

std::pair<Configuration, OraclePrediction> dirac2d_config(int m, std::uint64_t seed) {
    if (m < 2) throw Error("dirac2d_config needs m >= 2");
    const SpherePoints sphere = tammes_points(m, 2, seed);

    // Radius chosen so the light-cone opening angle equals the achieved
    // minimal angle: cos(theta) = 1 - 2/tau^2.
    const double tau = std::sqrt(2.0 / (1.0 - std::cos(sphere.min_angle)));

    Configuration config;
    config.weights = VectorR::Constant(m, 1.0 / m);
    for (const auto& p : sphere.points) {
        BlochCoords c;
        c.tau = tau;
        c.direction = Eigen::Vector3d(p[0], p[1], p[2]);
        config.points.push_back(f2_from_bloch(c));
    }

    const TrivialityReport trivial = is_causally_trivial(config);
    if (!trivial.trivial) {
        std::ostringstream os;
        os << "dirac2d configuration has " << trivial.offending.size()
           << " non-spacelike off-diagonal pair(s)";
        throw NotCausallyTrivialError(os.str());
    }

    OraclePrediction pred;
    pred.tau = tau;
    pred.action = tau * tau / (2.0 * m);
    pred.boundedness = boundedness_f2_trivial(tau, m);
    pred.regime = Regime::Exact;
    return {std::move(config), pred};
}

double dirac4d_lagrangian(double tau, double theta) {
    if (tau < 1.0) throw TauBelowOneError("dirac4d_lagrangian needs tau >= 1");
    const double c = std::cos(theta);
    const double value = tau * tau / 64.0 * (1.0 + c) * (2.0 - tau * tau * (1.0 - c));
    return value > 0.0 ? value : 0.0;
}

MatrixC dirac_gamma(int k) {
    const Complex i(0.0, 1.0);
    MatrixC g = MatrixC::Zero(4, 4);
    if (k >= 1 && k <= 3) {
        g.topLeftCorner(2, 2) = pauli(k);
        g.bottomRightCorner(2, 2) = -pauli(k);
    } else if (k == 4) {
        g.topRightCorner(2, 2) = i * Eigen::Matrix2cd::Identity();
        g.bottomLeftCorner(2, 2) = -i * Eigen::Matrix2cd::Identity();
    } else if (k == 5) {
        g.topRightCorner(2, 2) = Eigen::Matrix2cd::Identity();
        g.bottomLeftCorner(2, 2) = Eigen::Matrix2cd::Identity();
    } else {
        throw Error("dirac_gamma index must be 1..5");
    }
    return g;
}

std::pair<Configuration, OraclePrediction> dirac4d_config(int m, std::uint64_t seed) {
    if (m < 2) throw Error("dirac4d_config needs m >= 2");
    const SpherePoints sphere = tammes_points(m, 4, seed);
    const double tau = std::sqrt(2.0 / (1.0 - std::cos(sphere.min_angle)));

    Configuration config;
    config.weights = VectorR::Constant(m, 1.0 / m);
    for (const auto& p : sphere.points) {
        MatrixC mat = MatrixC::Identity(4, 4);
        for (int k = 1; k <= 5; ++k) mat += tau * p[k - 1] * dirac_gamma(k);
        mat *= 0.25;
        config.points.push_back(validate_point(mat, 2));
    }

    const TrivialityReport trivial = is_causally_trivial(config);
    if (!trivial.trivial) {
        std::ostringstream os;
        os << "dirac4d configuration has " << trivial.offending.size()
           << " non-spacelike off-diagonal pair(s)";
        throw NotCausallyTrivialError(os.str());
    }

    OraclePrediction pred;
    pred.tau = tau;
    pred.action = tau * tau / (16.0 * m);
    pred.boundedness = (tau * tau - 1.0) * (tau * tau - 1.0) / 16.0;
    pred.regime = Regime::Exact;  // boundedness entry is leading order only
    return {std::move(config), pred};
}

Configuration orthogonal_min_config(int n, int f, int m) {
    if (n < 1 || m < 1) throw Error("orthogonal_min_config needs n, m >= 1");
    if (f < m * n) {
        std::ostringstream os;
        os << "orthogonal images need f >= m n, got f = " << f << ", m n = " << m * n;
        throw DimensionTooSmallError(os.str());
    }
    Configuration config;
    config.weights = VectorR::Constant(m, 1.0 / m);
    for (int i = 0; i < m; ++i) {
        MatrixC mat = MatrixC::Zero(f, f);
        for (int k = 0; k < n; ++k) mat(i * n + k, i * n + k) = Complex(1.0 / n, 0.0);
        OperatorPoint p;
        p.matrix = std::move(mat);
        p.f = f;
        p.n = n;
        p.eigenvalues = VectorR::Zero(f);
        p.eigenvalues.tail(n).setConstant(1.0 / n);
        config.points.push_back(std::move(p));
    }
    return config;
}

double welch_floor(int f) {
    if (f < 2) throw Error("welch_floor needs f >= 2");
    return 1.0 / (static_cast<double>(f) * (f + 1));
}

Configuration sic_tetrahedron() {
    // Bloch directions of a regular tetrahedron; the rank-one projectors
    // (1 + d.sigma)/2 then satisfy |<v_i|v_j>|^2 = (1 + cos theta)/2 = 1/3,
    // so sum_{ij} |<v_i|v_j>|^4 = 4 + 12/9 = 16/3 and S = (16/3)/32 = 1/6.
    const double s = 1.0 / std::sqrt(3.0);
    const Eigen::Vector3d dirs[4] = {
        {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    Configuration config;
    config.weights = VectorR::Constant(4, 0.25);
    for (const auto& d : dirs) {
        BlochCoords c;
        c.tau = 1.0;
        c.direction = d;
        config.points.push_back(f2_from_bloch(c));
    }
    return config;
}

std::pair<VectorR, double> optimal_weights(const VectorR& taus) {
    if (taus.size() == 0) throw Error("optimal_weights needs at least one radius");
    if (taus.minCoeff() < 1.0) throw TauBelowOneError("optimal_weights needs all taus >= 1");
    const VectorR inv = taus.array().square().inverse();
    return {inv / inv.sum(), 0.5 / inv.sum()};
}

TrivialityReport is_causally_trivial(const Configuration& config) {
    const ActionReport report = causal_action(config);
    TrivialityReport out;
    for (int i = 0; i < config.size(); ++i)
        for (int j = i + 1; j < config.size(); ++j)
            if (report.pair_lagrangians(i, j) >= 1e-10) {
                out.trivial = false;
                out.offending.emplace_back(i, j);
            }
    return out;
}

LocalMinReport local_min_check(const Configuration& config) {
    config.validate();
    if (config.f() != 2 || config.n() != 1)
        throw Error("local_min_check is defined for f = 2, n = 1");
    const TrivialityReport trivial = is_causally_trivial(config);
    if (!trivial.trivial)
        throw NotCausallyTrivialError("local_min_check requires a causally trivial configuration");

    const int m = config.size();
    std::vector<BlochCoords> bloch(m);
    for (int i = 0; i < m; ++i) bloch[i] = f2_to_bloch(config.points[i]);

    LocalMinReport report;
    report.points.resize(m);
    report.all_pass = true;

    for (int i = 0; i < m; ++i) {
        auto& verdict = report.points[i];

        // Lightlike partners: pairs sitting on the light-cone boundary angle.
        std::vector<int> partners;
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            const double c = std::clamp(bloch[i].direction.dot(bloch[j].direction), -1.0, 1.0);
            const double angle = std::acos(c);
            const double critical = critical_angles(bloch[i].tau, bloch[j].tau).theta_minus;
            if (std::abs(angle - critical) < 1e-8) partners.push_back(j);
        }
        const int k = static_cast<int>(partners.size());
        verdict.lightlike_partners = k;
        verdict.hypothesis_met = k >= 3;
        verdict.tau_ok =
            verdict.hypothesis_met &&
            bloch[i].tau >= std::sqrt(static_cast<double>(k) / (k - 2)) - 1e-12;

        // Angular coverage: every tangent perturbation of the direction must
        // drive at least one lightlike partner inside the cone (the action
        // resists motion in all directions). Sampled on a ring of 64.
        Eigen::Vector3d axis = bloch[i].direction;
        Eigen::Vector3d t1 = axis.cross(Eigen::Vector3d(1, 0, 0));
        if (t1.norm() < 1e-6) t1 = axis.cross(Eigen::Vector3d(0, 1, 0));
        t1.normalize();
        const Eigen::Vector3d t2 = axis.cross(t1).normalized();

        bool covered = k > 0;
        const double eps = 1e-3;
        for (int ring = 0; ring < 64 && covered; ++ring) {
            const double phi = 2.0 * M_PI * ring / 64.0;
            const Eigen::Vector3d moved =
                (axis + eps * (std::cos(phi) * t1 + std::sin(phi) * t2)).normalized();
            bool tightened = false;
            for (int j : partners) {
                const double c = std::clamp(moved.dot(bloch[j].direction), -1.0, 1.0);
                const double angle = std::acos(c);
                const double critical =
                    critical_angles(bloch[i].tau, bloch[j].tau).theta_minus;
                if (angle < critical - 1e-9) {
                    tightened = true;
                    break;
                }
            }
            covered = tightened;
        }
        verdict.angular_ok = covered;

        verdict.pass = verdict.hypothesis_met && verdict.tau_ok && verdict.angular_ok;
        report.all_pass = report.all_pass && verdict.pass;
    }
    return report;
}

std::vector<LabeledPrediction> asymptotic_table(int n, int f, int m) {
    std::vector<LabeledPrediction> table;
    if (f >= m * n) {
        LabeledPrediction row;
        row.label = "orthogonal-images floor 1/(2 m n^3)";
        row.prediction.action = 1.0 / (2.0 * m * n * n * n);
        row.prediction.regime = Regime::Exact;
        table.push_back(std::move(row));
    }
    if (n == 1 && f == 2) {
        LabeledPrediction row;
        row.label = "2d Dirac-sphere asymptote sqrt(3)/(4 pi)";
        row.prediction.tau = std::pow(3.0, 0.25) * std::sqrt(m / (2.0 * M_PI));
        row.prediction.action = std::sqrt(3.0) / (4.0 * M_PI);
        row.prediction.boundedness = 3.0 * m * m / (16.0 * M_PI * M_PI);
        row.prediction.regime = Regime::Asymptotic;
        table.push_back(std::move(row));
    }
    if (n == 2 && f == 4) {
        LabeledPrediction row;
        row.label = "4d Dirac-sphere asymptote sqrt(3)/(16 pi sqrt(m))";
        row.prediction.tau = std::pow(3.0, 0.25) * std::pow(m, 0.25) / std::sqrt(M_PI);
        row.prediction.action = std::sqrt(3.0) / (16.0 * M_PI * std::sqrt(m));
        row.prediction.boundedness = 3.0 * m / (16.0 * M_PI * M_PI);
        row.prediction.regime = Regime::Asymptotic;
        table.push_back(std::move(row));
    }
    if (n == 1) {
        LabeledPrediction row;
        row.label = "rank-one equal-weight Welch floor 1/(f(f+1))";
        row.prediction.action = welch_floor(f);
        row.prediction.regime = Regime::Exact;
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace cfs
