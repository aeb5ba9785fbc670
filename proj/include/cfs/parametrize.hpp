#ifndef CFS_PARAMETRIZE_HPP
#define CFS_PARAMETRIZE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cfs/operators.hpp"
#include "cfs/rng.hpp"

namespace cfs {

struct Shape {
    int n = 1;
    int f = 2;
    int m = 1;
};

/// The D unconstrained real optimization parameters.
struct UnconstrainedParams {
    Shape shape;
    VectorR c_tilde;                 // m
    Eigen::MatrixXd mu_plus;         // m x n
    Eigen::MatrixXd mu_minus;        // m x n
    std::vector<MatrixC> b1;         // m of 2n x 2n
    std::vector<MatrixC> b2;         // m of 2n x (f-2n), zero-width when f = 2n

    /// Flat layout: c_tilde, mu_plus row-major, mu_minus, then per point the
    /// interleaved (re, im) entries of B1 row-major, then B2.
    VectorR pack() const;
    static UnconstrainedParams unpack(const VectorR& flat, const Shape& shape);
};

struct DofReport {
    int d_unconstrained = 0;  // D  = m (4fn + 2n + 1)
    int d_effective = 0;      // D' = m (4fn - 4n^2) - 1
    int eliminated = 0;
};

DofReport dof(int n, int f, int m);
int dof_unconstrained(const Shape& shape);

/// U = exp(-i H) for the Hermitian generator assembled from the blocks
/// H1 = (B1 + B1^*) with zeroed diagonal and the off-diagonal coupling B2.
/// Computed by eigendecomposition of the generator.
MatrixC unitary_from_generator(const MatrixC& b1, const MatrixC& b2);

/// Everything decode computes, kept for reuse by the gradient.
struct DecodedPoint {
    VectorR p, q;          // exp(mu+), exp(mu-) after the sign-flip rule
    bool flipped = false;  // superscripts swapped because Gamma was negative
    double gamma = 0.0;    // > 0 after flip
    VectorR nu;            // 2n non-trivial eigenvalues (nu+ then nu-)
    MatrixC generator;     // Hermitian H
    MatrixC gen_vectors;   // eigenvectors V of H
    VectorR gen_values;    // eigenvalues of H
    MatrixC unitary;       // U = exp(-i H)
    MatrixC x;             // U diag(nu, 0...) U^*
};

struct Decoded {
    Shape shape;
    VectorR weights;                  // softmax of c_tilde
    std::vector<DecodedPoint> points;
    Configuration configuration() const;
};

/// Maps unconstrained parameters to a valid Configuration. Throws
/// DegenerateTraceError when some |Gamma_i| < 1e-12 (caller re-perturbs)
/// and NonFiniteError on non-finite input.
Decoded decode_full(const UnconstrainedParams& params);
Configuration decode(const UnconstrainedParams& params);

/// Random initialization: c ~ N(1, sigma_c), mu+ ~ N(log(mu0 + 1/n), sigma_mu),
/// mu- ~ N(log mu0, sigma_mu), B entries (re and im) ~ U(-pi, pi).
UnconstrainedParams init_random(const Shape& shape, std::uint64_t seed,
                                double sigma_c = 0.01, double sigma_mu = 0.01,
                                double mu0 = 1.0);

/// Default initial spectral scale as a function of (n, m); floored at 0.01
/// where the closed form goes non-positive. Throws UnsupportedSpinError for
/// n outside {1, 2}.
double default_mu0(int n, int m);

}  // namespace cfs

#endif  // CFS_PARAMETRIZE_HPP
