#include "cfs/parametrize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cfs {

namespace {

void check_shape(const Shape& s) {
    if (s.n < 1 || s.m < 1) throw Error("shape requires n >= 1 and m >= 1");
    if (s.f < 2 * s.n) {
        std::ostringstream os;
        os << "Hilbert dimension f = " << s.f << " is below 2n = " << 2 * s.n;
        throw DimensionTooSmallError(os.str());
    }
}

}  // namespace

int dof_unconstrained(const Shape& s) {
    return s.m * (4 * s.f * s.n + 2 * s.n + 1);
}

DofReport dof(int n, int f, int m) {
    Shape s{n, f, m};
    check_shape(s);
    DofReport r;
    r.d_unconstrained = dof_unconstrained(s);
    r.d_effective = m * (4 * f * n - 4 * n * n) - 1;
    r.eliminated = r.d_unconstrained - r.d_effective;
    return r;
}

VectorR UnconstrainedParams::pack() const {
    check_shape(shape);
    const int n = shape.n, f = shape.f, m = shape.m;
    VectorR flat(dof_unconstrained(shape));
    int at = 0;
    for (int i = 0; i < m; ++i) flat[at++] = c_tilde[i];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) flat[at++] = mu_plus(i, k);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) flat[at++] = mu_minus(i, k);
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < 2 * n; ++r)
            for (int c = 0; c < 2 * n; ++c) {
                flat[at++] = b1[i](r, c).real();
                flat[at++] = b1[i](r, c).imag();
            }
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < 2 * n; ++r)
            for (int c = 0; c < f - 2 * n; ++c) {
                flat[at++] = b2[i](r, c).real();
                flat[at++] = b2[i](r, c).imag();
            }
    return flat;
}

UnconstrainedParams UnconstrainedParams::unpack(const VectorR& flat, const Shape& shape) {
    check_shape(shape);
    if (flat.size() != dof_unconstrained(shape))
        throw Error("flat parameter vector has wrong length");
    const int n = shape.n, f = shape.f, m = shape.m;

    UnconstrainedParams p;
    p.shape = shape;
    p.c_tilde.resize(m);
    p.mu_plus.resize(m, n);
    p.mu_minus.resize(m, n);
    p.b1.assign(m, MatrixC(2 * n, 2 * n));
    p.b2.assign(m, MatrixC(2 * n, f - 2 * n));

    int at = 0;
    for (int i = 0; i < m; ++i) p.c_tilde[i] = flat[at++];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) p.mu_plus(i, k) = flat[at++];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) p.mu_minus(i, k) = flat[at++];
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < 2 * n; ++r)
            for (int c = 0; c < 2 * n; ++c) {
                const double re = flat[at++];
                const double im = flat[at++];
                p.b1[i](r, c) = Complex(re, im);
            }
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < 2 * n; ++r)
            for (int c = 0; c < f - 2 * n; ++c) {
                const double re = flat[at++];
                const double im = flat[at++];
                p.b2[i](r, c) = Complex(re, im);
            }
    return p;
}

MatrixC unitary_from_generator(const MatrixC& b1, const MatrixC& b2) {
    const int tn = static_cast<int>(b1.rows());
    const int rest = static_cast<int>(b2.cols());
    const int f = tn + rest;

    MatrixC h = MatrixC::Zero(f, f);
    MatrixC h1 = b1 + b1.adjoint();
    h1.diagonal().setZero();
    h.topLeftCorner(tn, tn) = h1;
    h.topRightCorner(tn, rest) = b2;
    h.bottomLeftCorner(rest, tn) = b2.adjoint();

    Eigen::SelfAdjointEigenSolver<MatrixC> es(h);
    if (es.info() != Eigen::Success) throw EigensolverError("eigensolver failed on generator");
    const Complex mi(0.0, -1.0);
    VectorC phases = (mi * es.eigenvalues().cast<Complex>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Decoded decode_full(const UnconstrainedParams& params) {
    check_shape(params.shape);
    const int n = params.shape.n, f = params.shape.f, m = params.shape.m;
    if (!params.pack().allFinite()) throw NonFiniteError("non-finite parameter value");

    Decoded d;
    d.shape = params.shape;

    // Softmax weights, stabilized against overflow.
    const double cmax = params.c_tilde.maxCoeff();
    VectorR w = (params.c_tilde.array() - cmax).exp();
    d.weights = w / w.sum();

    d.points.reserve(m);
    for (int i = 0; i < m; ++i) {
        DecodedPoint pt;
        pt.p = params.mu_plus.row(i).transpose().array().exp();
        pt.q = params.mu_minus.row(i).transpose().array().exp();
        double gamma = pt.p.sum() - pt.q.sum();
        if (std::abs(gamma) < 1e-12) {
            std::ostringstream os;
            os << "trace normalization degenerate at point " << i << " (Gamma = " << gamma << ")";
            throw DegenerateTraceError(os.str());
        }
        if (gamma < 0.0) {
            // Exponent roles swap so the larger family stays positive and the
            // normalized trace comes out +1.
            std::swap(pt.p, pt.q);
            gamma = -gamma;
            pt.flipped = true;
        }
        pt.gamma = gamma;

        pt.nu.resize(2 * n);
        pt.nu.head(n) = pt.p / gamma;
        pt.nu.tail(n) = -pt.q / gamma;

        MatrixC h = MatrixC::Zero(f, f);
        MatrixC h1 = params.b1[i] + params.b1[i].adjoint();
        h1.diagonal().setZero();
        h.topLeftCorner(2 * n, 2 * n) = h1;
        h.topRightCorner(2 * n, f - 2 * n) = params.b2[i];
        h.bottomLeftCorner(f - 2 * n, 2 * n) = params.b2[i].adjoint();
        pt.generator = h;

        Eigen::SelfAdjointEigenSolver<MatrixC> es(h);
        if (es.info() != Eigen::Success)
            throw EigensolverError("eigensolver failed on generator");
        pt.gen_vectors = es.eigenvectors();
        pt.gen_values = es.eigenvalues();
        const Complex mi(0.0, -1.0);
        VectorC phases = (mi * pt.gen_values.cast<Complex>()).array().exp();
        pt.unitary = pt.gen_vectors * phases.asDiagonal() * pt.gen_vectors.adjoint();

        const MatrixC left = pt.unitary.leftCols(2 * n);
        pt.x = left * pt.nu.cast<Complex>().asDiagonal() * left.adjoint();
        pt.x = (Complex(0.5, 0.0) * (pt.x + pt.x.adjoint())).eval();  // adjoint aliases
        d.points.push_back(std::move(pt));
    }
    return d;
}

Configuration Decoded::configuration() const {
    const int n = shape.n, f = shape.f;
    Configuration config;
    config.weights = weights;
    config.points.reserve(points.size());
    for (const auto& pt : points) {
        OperatorPoint op;
        op.matrix = pt.x;
        op.f = f;
        op.n = n;
        VectorR ev = VectorR::Zero(f);
        ev.head(2 * n) = pt.nu;
        std::sort(ev.data(), ev.data() + f);
        op.eigenvalues = std::move(ev);
        config.points.push_back(std::move(op));
    }
    return config;
}

Configuration decode(const UnconstrainedParams& params) {
    return decode_full(params).configuration();
}

UnconstrainedParams init_random(const Shape& shape, std::uint64_t seed,
                                double sigma_c, double sigma_mu, double mu0) {
    check_shape(shape);
    const int n = shape.n, f = shape.f, m = shape.m;
    Rng rng(seed);

    UnconstrainedParams p;
    p.shape = shape;
    p.c_tilde.resize(m);
    p.mu_plus.resize(m, n);
    p.mu_minus.resize(m, n);
    p.b1.assign(m, MatrixC(2 * n, 2 * n));
    p.b2.assign(m, MatrixC(2 * n, f - 2 * n));

    // Draw order matches the flat layout so a seed pins the whole vector.
    for (int i = 0; i < m; ++i) p.c_tilde[i] = rng.normal(1.0, sigma_c);
    const double mean_plus = std::log(mu0 + 1.0 / n);
    const double mean_minus = std::log(mu0);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) p.mu_plus(i, k) = rng.normal(mean_plus, sigma_mu);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) p.mu_minus(i, k) = rng.normal(mean_minus, sigma_mu);
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < 2 * n; ++r)
            for (int c = 0; c < 2 * n; ++c) {
                const double re = rng.uniform(-M_PI, M_PI);
                const double im = rng.uniform(-M_PI, M_PI);
                p.b1[i](r, c) = Complex(re, im);
            }
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < 2 * n; ++r)
            for (int c = 0; c < f - 2 * n; ++c) {
                const double re = rng.uniform(-M_PI, M_PI);
                const double im = rng.uniform(-M_PI, M_PI);
                p.b2[i](r, c) = Complex(re, im);
            }
    return p;
}

double default_mu0(int n, int m) {
    if (m < 1) throw Error("m must be positive");
    double value;
    if (n == 1) {
        value = 1.25 * (std::pow(3.0, 0.25) * std::sqrt(m / (2.0 * M_PI)) - 1.0);
    } else if (n == 2) {
        value = 0.25 * (std::pow(3.0 * m, 0.25) / std::sqrt(M_PI) - 1.0);
    } else {
        throw UnsupportedSpinError("no default initial scale for n outside {1, 2}");
    }
    return std::max(value, 0.01);
}

}  // namespace cfs
