#ifndef CFS_OPERATORS_HPP
#define CFS_OPERATORS_HPP

#include <Eigen/Dense>
#include <vector>

#include "cfs/errors.hpp"

namespace cfs {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;
using VectorR = Eigen::VectorXd;

enum class CausalClass { Spacelike, Timelike, Lightlike };

const char* to_string(CausalClass c);

/// A Hermitian unit-trace operator with at most n positive and at most n
/// negative eigenvalues: one candidate spacetime point.
struct OperatorPoint {
    MatrixC matrix;          // f x f Hermitian, trace one
    int f = 0;               // Hilbert space dimension
    int n = 0;               // spin dimension
    VectorR eigenvalues;     // cached, ascending

    int dim() const { return f; }
};

/// Normalized weighted counting measure: m points with weights on the simplex.
struct Configuration {
    std::vector<OperatorPoint> points;
    VectorR weights;

    int size() const { return static_cast<int>(points.size()); }
    int n() const { return points.empty() ? 0 : points.front().n; }
    int f() const { return points.empty() ? 0 : points.front().f; }

    /// Throws if weights leave the simplex or the points disagree on (n, f).
    void validate() const;
};

/// Polar coordinates (tau, unit direction) of the f=2 operator manifold.
struct BlochCoords {
    double tau = 1.0;
    Eigen::Vector3d direction{0.0, 0.0, 1.0};
};

/// Validates a candidate matrix and returns it as an OperatorPoint with
/// cached eigenvalues. The matrix is symmetrized on ingestion; a correction
/// larger than 1e-8 triggers a NotHermitianError.
OperatorPoint validate_point(const MatrixC& matrix, int n);

/// F_tau(x) = (1 + tau x.sigma) / 2 on C^2; eigenvalues (1 +- tau)/2.
OperatorPoint f2_from_bloch(const BlochCoords& coords);

/// Inverse of f2_from_bloch. Throws TauBelowOneError for operators inside
/// the open unit ball (tau < 1), which are not in the admissible set.
BlochCoords f2_to_bloch(const OperatorPoint& x);

/// The three Pauli matrices.
Eigen::Matrix2cd pauli(int k);

}  // namespace cfs

#endif  // CFS_OPERATORS_HPP
