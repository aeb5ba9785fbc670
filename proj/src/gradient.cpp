#include "cfs/gradient.hpp"

#include <cmath>

namespace cfs {

namespace {

// All adjoints use the pairing dL = Re tr(A_bar dA).
struct PointAdjoint {
    MatrixC xbar;   // vs the operator x itself (kept Hermitian)
    MatrixC ubar;   // vs the unitary U
    VectorR nubar;  // vs the 2n non-trivial eigenvalues
};

// sin(d)/d, series for small arguments.
double sinc(double d) {
    if (std::abs(d) < 1e-8) return 1.0 - d * d / 6.0;
    return std::sin(d) / d;
}

// Entrywise factor of the exp(-iH) differential in the eigenbasis of H:
// F_kl = (e^{-i l_k} - e^{-i l_l}) / (l_k - l_l), continued across l_k = l_l.
MatrixC exp_diff_factor(const VectorR& lambda) {
    const int f = static_cast<int>(lambda.size());
    const Complex mi(0.0, -1.0);
    MatrixC factor(f, f);
    for (int k = 0; k < f; ++k)
        for (int l = 0; l < f; ++l) {
            const double mean = 0.5 * (lambda[k] + lambda[l]);
            const double half = 0.5 * (lambda[k] - lambda[l]);
            factor(k, l) = mi * std::exp(mi * mean) * sinc(half);
        }
    return factor;
}

}  // namespace

double action_of_params(const UnconstrainedParams& params) {
    return causal_action(decode(params)).action;
}

double action_value_flat(const VectorR& flat, const Shape& shape) {
    return action_of_params(UnconstrainedParams::unpack(flat, shape));
}

ActionGradient grad(const UnconstrainedParams& params) {
    const Decoded dec = decode_full(params);
    const int n = dec.shape.n, f = dec.shape.f, m = dec.shape.m;
    const int tn = 2 * n;

    ActionGradient out;
    for (const auto& pt : dec.points)
        if (pt.gamma < 1e-6) out.smooth = false;

    std::vector<PointAdjoint> adj(m);
    for (auto& a : adj) {
        a.xbar = MatrixC::Zero(f, f);
        a.ubar = MatrixC::Zero(f, f);
        a.nubar = VectorR::Zero(tn);
    }

    Eigen::MatrixXd lag(m, m);
    double action = 0.0;

    for (int i = 0; i < m; ++i) {
        const auto& pi = dec.points[i];
        for (int j = 0; j < m; ++j) {
            const auto& pj = dec.points[j];
            const double kappa = dec.weights[i] * dec.weights[j];

            if (n == 1) {
                // Smooth closed form: L = (1/2) max(0, 2 tr((xy)^2) - tr(xy)^2).
                const MatrixC prod = pi.x * pj.x;
                const double tr = prod.trace().real();
                const double tr_sq = prod.cwiseProduct(prod.transpose()).sum().real();
                const double disc = 2.0 * tr_sq - tr * tr;
                lag(i, j) = 0.5 * std::max(0.0, disc);
                const double scale = std::abs(tr_sq) + tr * tr + 1e-300;
                if (std::abs(disc) < 1e-7 * scale) out.smooth = false;
                if (disc > 0.0) {
                    adj[i].xbar += kappa * (2.0 * (pj.x * pi.x * pj.x) - tr * pj.x);
                    adj[j].xbar += kappa * (2.0 * (pi.x * pj.x * pi.x) - tr * pi.x);
                }
            } else {
                // Reduced product on the image of x_i: M = diag(nu) P^* x_j P.
                const MatrixC p_basis = pi.unitary.leftCols(tn);
                const MatrixC px = p_basis.adjoint() * pj.x;   // 2n x f
                const MatrixC big_n = px * p_basis;            // 2n x 2n
                const MatrixC red = pi.nu.cast<Complex>().asDiagonal() * big_n;

                Eigen::ComplexEigenSolver<MatrixC> es(red, /*computeEigenvectors=*/true);
                if (es.info() != Eigen::Success)
                    throw EigensolverError("eigensolver failed on reduced product matrix");
                const VectorC lam = es.eigenvalues();
                const MatrixC w = es.eigenvectors();

                const VectorR mod = lam.cwiseAbs();
                const double hi = std::max(mod.maxCoeff(), 1e-300);
                const double total = mod.sum();
                lag(i, j) = std::max(0.0, mod.squaredNorm() - total * total / (2.0 * n));

                if (mod.minCoeff() < 1e-6 * hi) out.smooth = false;
                for (int k = 0; k < tn; ++k)
                    for (int l = k + 1; l < tn; ++l)
                        if (std::abs(lam[k] - lam[l]) < 1e-6 * hi) out.smooth = false;

                // dL = Re tr(G dM) with G = W diag(a_k conj(l_k)) W^{-1},
                // a_k = dL/d|l_k| / |l_k|.
                VectorC coeff(tn);
                for (int k = 0; k < tn; ++k)
                    coeff[k] = (mod[k] > 1e-12 * hi)
                                   ? Complex((2.0 * mod[k] - total / n) / mod[k], 0.0) *
                                         std::conj(lam[k])
                                   : Complex(0.0, 0.0);
                const MatrixC g =
                    w * coeff.asDiagonal() * w.partialPivLu().solve(MatrixC::Identity(tn, tn));

                adj[i].nubar += kappa * (big_n * g).diagonal().real();
                const MatrixC gd = g * pi.nu.cast<Complex>().asDiagonal();
                adj[i].ubar.topRows(tn) += kappa * ((gd + gd.adjoint()) * px);
                const MatrixC a = p_basis * gd * p_basis.adjoint();
                adj[j].xbar += kappa * 0.5 * (a + a.adjoint());
            }

            action += kappa * lag(i, j);
        }
    }

    // Assemble the flat gradient in pack() order.
    const int rest = f - tn;
    VectorR g_c(m);
    Eigen::MatrixXd g_mu_plus(m, n), g_mu_minus(m, n);
    std::vector<Eigen::MatrixXd> g_b1_re(m), g_b1_im(m), g_b2_re(m), g_b2_im(m);

    for (int i = 0; i < m; ++i) {
        const auto& pt = dec.points[i];
        auto& a = adj[i];

        // Route the operator adjoint into x = U diag(nu, 0) U^*.
        const MatrixC ux = pt.unitary.adjoint() * a.xbar;           // U^* xbar
        a.ubar.topRows(tn) += 2.0 * (pt.nu.cast<Complex>().asDiagonal() * ux.topRows(tn));
        const MatrixC uxu = ux * pt.unitary;
        a.nubar += uxu.diagonal().head(tn).real();

        // Through U = exp(-iH) in the eigenbasis of the generator.
        const MatrixC inner = pt.gen_vectors.adjoint() * a.ubar * pt.gen_vectors;
        MatrixC hbar = pt.gen_vectors * inner.cwiseProduct(exp_diff_factor(pt.gen_values)) *
                       pt.gen_vectors.adjoint();
        hbar = (0.5 * (hbar + hbar.adjoint())).eval();  // adjoint aliases hbar

        // H1 = (B1 + B1^*) with zeroed diagonal: diagonal entries of B1 are inert.
        g_b1_re[i].setZero(tn, tn);
        g_b1_im[i].setZero(tn, tn);
        for (int r = 0; r < tn; ++r)
            for (int c = 0; c < tn; ++c) {
                if (r == c) continue;
                g_b1_re[i](r, c) = 2.0 * hbar(c, r).real();
                g_b1_im[i](r, c) = -2.0 * hbar(c, r).imag();
            }
        g_b2_re[i].setZero(tn, rest);
        g_b2_im[i].setZero(tn, rest);
        for (int r = 0; r < tn; ++r)
            for (int c = 0; c < rest; ++c) {
                g_b2_re[i](r, c) = 2.0 * hbar(tn + c, r).real();
                g_b2_im[i](r, c) = -2.0 * hbar(tn + c, r).imag();
            }

        // nu+ = p/Gamma, nu- = -q/Gamma, Gamma = sum(p) - sum(q).
        const double gamma = pt.gamma;
        const double wp = a.nubar.head(n).dot(pt.p);   // sum nubar+ p
        const double wq = a.nubar.tail(n).dot(pt.q);   // sum nubar- q
        VectorR gp(n), gq(n);
        for (int l = 0; l < n; ++l) {
            gp[l] = pt.p[l] * (a.nubar[l] / gamma + (wq - wp) / (gamma * gamma));
            gq[l] = pt.q[l] * (-a.nubar[n + l] / gamma + (wp - wq) / (gamma * gamma));
        }
        if (pt.flipped) {
            g_mu_plus.row(i) = gq.transpose();
            g_mu_minus.row(i) = gp.transpose();
        } else {
            g_mu_plus.row(i) = gp.transpose();
            g_mu_minus.row(i) = gq.transpose();
        }
    }

    // Softmax weights: dS/dc_a = 2 sum_j c_j L_aj, pulled back through softmax.
    VectorR gbar = 2.0 * (lag * dec.weights);
    const double mean = dec.weights.dot(gbar);
    for (int i = 0; i < m; ++i) g_c[i] = dec.weights[i] * (gbar[i] - mean);

    VectorR flat(dof_unconstrained(dec.shape));
    int at = 0;
    for (int i = 0; i < m; ++i) flat[at++] = g_c[i];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) flat[at++] = g_mu_plus(i, k);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) flat[at++] = g_mu_minus(i, k);
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < tn; ++r)
            for (int c = 0; c < tn; ++c) {
                flat[at++] = g_b1_re[i](r, c);
                flat[at++] = g_b1_im[i](r, c);
            }
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < tn; ++r)
            for (int c = 0; c < rest; ++c) {
                flat[at++] = g_b2_re[i](r, c);
                flat[at++] = g_b2_im[i](r, c);
            }

    out.action = action;
    out.grad = std::move(flat);
    return out;
}

ActionGradient grad_flat(const VectorR& flat, const Shape& shape) {
    return grad(UnconstrainedParams::unpack(flat, shape));
}

GradCheckReport fd_check(const UnconstrainedParams& params, double step) {
    if (!(step > 0.0)) throw Error("fd_check requires a positive step");
    const ActionGradient analytic = grad(params);
    const VectorR base = params.pack();
    const Shape shape = params.shape;

    const double ginf = analytic.grad.cwiseAbs().maxCoeff();
    const double floor = 1e-3 * std::max(1.0, ginf);

    GradCheckReport report;
    report.step = step;
    report.smooth = analytic.smooth;
    for (int k = 0; k < base.size(); ++k) {
        VectorR x = base;
        x[k] = base[k] + step;
        const double fp = action_value_flat(x, shape);
        x[k] = base[k] - step;
        const double fm = action_value_flat(x, shape);
        const double fd = (fp - fm) / (2.0 * step);
        const double denom = std::max({std::abs(analytic.grad[k]), std::abs(fd), floor});
        const double rel = std::abs(analytic.grad[k] - fd) / denom;
        if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_index = k;
        }
    }
    return report;
}

}  // namespace cfs
