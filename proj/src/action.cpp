#include "cfs/action.hpp"

#include <algorithm>
#include <cmath>

namespace cfs {

namespace {

// Basis of the (at most 2n-dimensional) image of x: the n most positive and
// n most negative eigenvectors. When f < 2n the spectrum cannot fill both
// families; the spare columns stay zero and pad the product spectrum.
Eigen::MatrixXcd image_basis(const OperatorPoint& x, VectorR* nu_out) {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(x.matrix);
    if (es.info() != Eigen::Success) throw EigensolverError("eigensolver failed on operator point");
    const int f = x.f;
    const int n = x.n;
    MatrixC basis = MatrixC::Zero(f, 2 * n);
    VectorR nu = VectorR::Zero(2 * n);
    if (f >= 2 * n) {
        for (int k = 0; k < n; ++k) {             // most positive first
            basis.col(k) = es.eigenvectors().col(f - 1 - k);
            nu[k] = es.eigenvalues()[f - 1 - k];
        }
        for (int k = 0; k < n; ++k) {             // then most negative
            basis.col(n + k) = es.eigenvectors().col(k);
            nu[n + k] = es.eigenvalues()[k];
        }
    } else {
        for (int k = 0; k < f; ++k) {             // all of them, descending
            basis.col(k) = es.eigenvectors().col(f - 1 - k);
            nu[k] = es.eigenvalues()[f - 1 - k];
        }
    }
    if (nu_out) *nu_out = nu;
    return basis;
}

}  // namespace

ProductSpectrum product_spectrum(const OperatorPoint& x, const OperatorPoint& y) {
    if (x.f != y.f || x.n != y.n) throw Error("operands disagree on (n, f)");
    const int n = x.n;

    VectorR nu;
    MatrixC basis = image_basis(x, &nu);
    // x*y restricted to image(x) in the eigenbasis of x: M = diag(nu) * (P^* y P).
    MatrixC reduced = nu.cast<Complex>().asDiagonal() * MatrixC(basis.adjoint() * y.matrix * basis);

    Eigen::ComplexEigenSolver<MatrixC> es(reduced, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw EigensolverError("eigensolver failed on reduced product matrix");

    ProductSpectrum s;
    s.eigenvalues = es.eigenvalues();
    // Drop roundoff below the product scale so padded directions are exact zeros.
    const double scale = std::max(s.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
    for (int k = 0; k < 2 * n; ++k)
        if (std::abs(s.eigenvalues[k]) < 1e-14 * scale) s.eigenvalues[k] = Complex(0, 0);

    // A degenerate eigenvalue of the (generally non-normal) reduced matrix
    // splits by up to sqrt(machine eps) in a backward-stable solve, while the
    // mean of the cluster stays accurate to machine precision. Snap clusters
    // to their mean so multiplicities and boundary classifications survive.
    const double cluster_tol = 2e-7 * scale;
    std::vector<int> group(2 * n);
    for (int k = 0; k < 2 * n; ++k) group[k] = k;
    for (int k = 0; k < 2 * n; ++k)
        for (int l = k + 1; l < 2 * n; ++l)
            if (std::abs(s.eigenvalues[k] - s.eigenvalues[l]) < cluster_tol) {
                const int from = std::max(group[k], group[l]);
                const int to = std::min(group[k], group[l]);
                for (int& gid : group)
                    if (gid == from) gid = to;
            }
    for (int k = 0; k < 2 * n; ++k) {
        if (group[k] != k) continue;
        Complex sum(0, 0);
        int count = 0;
        for (int l = 0; l < 2 * n; ++l)
            if (group[l] == k) {
                sum += s.eigenvalues[l];
                ++count;
            }
        const Complex mean = sum / double(count);
        for (int l = 0; l < 2 * n; ++l)
            if (group[l] == k) s.eigenvalues[l] = mean;
    }

    s.causal_class = classify_spectrum(s.eigenvalues);
    return s;
}

CausalClass classify_spectrum(const VectorC& eigenvalues) {
    const VectorR moduli = eigenvalues.cwiseAbs();
    const double hi = moduli.maxCoeff();
    if (hi < 1e-13) return CausalClass::Spacelike;  // x*y = 0
    const double lo = moduli.minCoeff();
    const bool equal_moduli = (hi - lo) / hi < 1e-8;

    double max_imag = 0.0;
    for (int k = 0; k < eigenvalues.size(); ++k)
        max_imag = std::max(max_imag, std::abs(eigenvalues[k].imag()));
    const bool all_real = max_imag < 1e-9 * hi;

    if (equal_moduli) {
        if (!all_real) return CausalClass::Spacelike;
        // Real with equal moduli: opposite signs are genuinely spacelike,
        // a degenerate same-sign pair is the light-cone boundary.
        bool has_pos = false, has_neg = false;
        for (int k = 0; k < eigenvalues.size(); ++k) {
            if (eigenvalues[k].real() > 0) has_pos = true;
            if (eigenvalues[k].real() < 0) has_neg = true;
        }
        return (has_pos && has_neg) ? CausalClass::Spacelike : CausalClass::Lightlike;
    }
    return all_real ? CausalClass::Timelike : CausalClass::Lightlike;
}

CausalClass classify(const OperatorPoint& x, const OperatorPoint& y) {
    return product_spectrum(x, y).causal_class;
}

double lagrangian_from_spectrum(const VectorC& eigenvalues, int n) {
    // (1/4n) sum_{ij} (|l_i|-|l_j|)^2 = sum |l|^2 - (sum |l|)^2 / (2n)
    const VectorR moduli = eigenvalues.cwiseAbs();
    const double sum_sq = moduli.squaredNorm();
    const double sum = moduli.sum();
    return std::max(0.0, sum_sq - sum * sum / (2.0 * n));
}

double lagrangian(const OperatorPoint& x, const OperatorPoint& y) {
    return lagrangian_from_spectrum(product_spectrum(x, y).eigenvalues, x.n);
}

double lagrangian_n1_closed(const OperatorPoint& x, const OperatorPoint& y) {
    const MatrixC prod = x.matrix * y.matrix;
    const double tr = prod.trace().real();
    const double tr_sq = prod.cwiseProduct(prod.transpose()).sum().real();  // tr((xy)^2)
    return 0.5 * std::max(0.0, 2.0 * tr_sq - tr * tr);
}

CriticalAngles critical_angles(double tau, double tau2) {
    const double s = std::sqrt((tau * tau - 1.0) * (tau2 * tau2 - 1.0));
    const double cm = std::clamp((-1.0 + s) / (tau * tau2), -1.0, 1.0);
    const double cp = std::clamp((-1.0 - s) / (tau * tau2), -1.0, 1.0);
    return {std::acos(cm), std::acos(cp)};
}

double lagrangian_f2_angles(double tau, double tau2, double theta) {
    const double a = 1.0 + tau * tau2 * std::cos(theta);
    const double disc = a * a - (tau * tau - 1.0) * (tau2 * tau2 - 1.0);
    return disc > 0.0 ? disc / 8.0 : 0.0;
}

ActionReport causal_action(const Configuration& config) {
    config.validate();
    const int m = config.size();
    const int n = config.n();

    ActionReport report;
    report.pair_lagrangians = Eigen::MatrixXd::Zero(m, m);
    report.class_matrix.assign(m, std::vector<CausalClass>(m, CausalClass::Spacelike));

    Eigen::MatrixXd pair_t(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            ProductSpectrum spec;
            try {
                spec = product_spectrum(config.points[i], config.points[j]);
            } catch (const EigensolverError& e) {
                throw EigensolverError(std::string(e.what()) + " at pair (" +
                                       std::to_string(i) + "," + std::to_string(j) + ")");
            }
            const double lag = lagrangian_from_spectrum(spec.eigenvalues, n);
            const double abs_sum = spec.eigenvalues.cwiseAbs().sum();
            report.pair_lagrangians(i, j) = lag;
            report.pair_lagrangians(j, i) = lag;
            pair_t(i, j) = pair_t(j, i) = abs_sum * abs_sum;
            report.class_matrix[i][j] = spec.causal_class;
            report.class_matrix[j][i] = spec.causal_class;
        }
    }

    double action = 0.0, bound = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double w = config.weights[i] * config.weights[j];
            action += w * report.pair_lagrangians(i, j);
            bound += w * pair_t(i, j);
        }
    }
    report.action = action;
    report.boundedness = bound;
    return report;
}

double boundedness_f2_trivial(double tau, int m) {
    const double t2 = tau * tau;
    return (t2 - 1.0) * (t2 - 1.0) / 4.0 + t2 / m;
}

}  // namespace cfs
