#include "cfs/operators.hpp"

#include <cmath>
#include <sstream>

namespace cfs {

const char* to_string(CausalClass c) {
    switch (c) {
        case CausalClass::Spacelike: return "spacelike";
        case CausalClass::Timelike: return "timelike";
        case CausalClass::Lightlike: return "lightlike";
    }
    return "?";
}

Eigen::Matrix2cd pauli(int k) {
    const Complex i(0.0, 1.0);
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    switch (k) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, -i, i, 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw Error("pauli index must be 1, 2 or 3");
    }
    return s;
}

void Configuration::validate() const {
    if (points.empty()) throw Error("empty configuration");
    if (weights.size() != size()) throw Error("weights/points size mismatch");
    if (weights.minCoeff() < -1e-12) throw Error("negative weight");
    if (std::abs(weights.sum() - 1.0) > 1e-12) throw Error("weights do not sum to one");
    for (const auto& p : points) {
        if (p.n != n() || p.f != f()) throw Error("points disagree on (n, f)");
    }
}

OperatorPoint validate_point(const MatrixC& matrix, int n) {
    if (matrix.rows() != matrix.cols()) throw Error("matrix is not square");
    const int f = static_cast<int>(matrix.rows());
    if (n < 1) throw Error("spin dimension must be positive");

    const double herm_defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-8) {
        std::ostringstream os;
        os << "matrix is not Hermitian (defect " << herm_defect << ")";
        throw NotHermitianError(os.str());
    }
    MatrixC sym = 0.5 * (matrix + matrix.adjoint());

    const double tr = sym.trace().real();
    if (std::abs(tr - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "trace is " << tr << ", expected 1";
        throw TraceNotOneError(os.str());
    }

    Eigen::SelfAdjointEigenSolver<MatrixC> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigensolverError("eigensolver failed on point");
    VectorR ev = es.eigenvalues();

    // Tolerance relative to the spectral radius; decoded operators are exact
    // by construction, this only guards I/O round-trips.
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
    const double tol = 1e-9 * scale;
    int pos = 0, neg = 0;
    for (int k = 0; k < f; ++k) {
        if (ev[k] > tol) ++pos;
        else if (ev[k] < -tol) ++neg;
    }
    if (pos > n || neg > n) {
        std::ostringstream os;
        os << "signature violation: " << pos << " positive and " << neg
           << " negative eigenvalues for spin dimension " << n;
        throw SignatureViolationError(os.str(), pos, neg);
    }

    OperatorPoint p;
    p.matrix = std::move(sym);
    p.f = f;
    p.n = n;
    p.eigenvalues = std::move(ev);
    return p;
}

OperatorPoint f2_from_bloch(const BlochCoords& coords) {
    if (coords.tau < 1.0 - 1e-12) throw TauBelowOneError("tau must be >= 1");
    if (std::abs(coords.direction.norm() - 1.0) > 1e-12)
        throw Error("bloch direction must be a unit vector");

    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    for (int k = 1; k <= 3; ++k) m += coords.tau * coords.direction[k - 1] * pauli(k);
    m *= 0.5;

    OperatorPoint p;
    p.matrix = m;
    p.f = 2;
    p.n = 1;
    p.eigenvalues = VectorR(2);
    p.eigenvalues << 0.5 * (1.0 - coords.tau), 0.5 * (1.0 + coords.tau);
    return p;
}

BlochCoords f2_to_bloch(const OperatorPoint& x) {
    if (x.f != 2) throw Error("f2_to_bloch requires f = 2");
    // x = (1 + tau d.sigma)/2  =>  tau d_k = tr(x sigma_k)
    Eigen::Vector3d v;
    for (int k = 1; k <= 3; ++k)
        v[k - 1] = (x.matrix * pauli(k).cast<Complex>()).trace().real();
    const double tau = v.norm();
    if (tau < 1.0 - 1e-10) {
        std::ostringstream os;
        os << "operator lies inside the open unit ball (tau = " << tau << ")";
        throw TauBelowOneError(os.str());
    }
    BlochCoords c;
    c.tau = tau;
    c.direction = (tau > 0) ? Eigen::Vector3d(v / tau) : Eigen::Vector3d(0, 0, 1);
    return c;
}

}  // namespace cfs
