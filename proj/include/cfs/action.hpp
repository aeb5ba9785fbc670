#ifndef CFS_ACTION_HPP
#define CFS_ACTION_HPP

#include <Eigen/Dense>
#include <vector>

#include "cfs/operators.hpp"

namespace cfs {

/// Non-trivial eigenvalues of an operator product x*y, zero-padded to 2n,
/// together with the causal class of the pair.
struct ProductSpectrum {
    VectorC eigenvalues;  // length 2n
    CausalClass causal_class = CausalClass::Spacelike;
};

/// Full evaluation of a configuration: action, boundedness and the pair
/// matrices behind them.
struct ActionReport {
    double action = 0.0;        // S
    double boundedness = 0.0;   // T
    Eigen::MatrixXd pair_lagrangians;            // m x m, symmetric
    std::vector<std::vector<CausalClass>> class_matrix;
};

/// Non-trivial eigenvalues of x*y, computed on the image of x as a 2n x 2n
/// eigenproblem (never f x f).
ProductSpectrum product_spectrum(const OperatorPoint& x, const OperatorPoint& y);

/// Classify the spectrum of x*y by the moduli/reality of its eigenvalues.
CausalClass classify_spectrum(const VectorC& eigenvalues);
CausalClass classify(const OperatorPoint& x, const OperatorPoint& y);

/// Causal Lagrangian (1/4n) sum_{ij} (|l_i| - |l_j|)^2 over the 2n padded
/// eigenvalues of x*y.
double lagrangian(const OperatorPoint& x, const OperatorPoint& y);
double lagrangian_from_spectrum(const VectorC& eigenvalues, int n);

/// Closed form for spin dimension one: (1/2) max(0, 2 tr((xy)^2) - tr(xy)^2).
/// No eigensolve performed.
double lagrangian_n1_closed(const OperatorPoint& x, const OperatorPoint& y);

/// Closed form for f = 2 in Bloch coordinates (tau, tau', angle).
double lagrangian_f2_angles(double tau, double tau2, double theta);

/// Light-cone opening angles for an f = 2 pair:
/// cos(theta_-/+) = (-1 +- sqrt((tau^2-1)(tau2^2-1))) / (tau tau2).
struct CriticalAngles {
    double theta_minus;
    double theta_plus;
};
CriticalAngles critical_angles(double tau, double tau2);

/// Evaluates S, T and the pair matrices for a configuration.
ActionReport causal_action(const Configuration& config);

/// Exact boundedness (tau^2-1)^2/4 + tau^2/m of an equal-weight causally
/// trivial sphere configuration at radius tau.
double boundedness_f2_trivial(double tau, int m);

}  // namespace cfs

#endif  // CFS_ACTION_HPP
