#ifndef CFS_ORACLES_HPP
#define CFS_ORACLES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cfs/operators.hpp"

namespace cfs {

/// Packing density of the densest sphere packing in dimension 2 and 4;
/// these control the large-m asymptotics of the Dirac-sphere constructions.
inline constexpr double kPackingDensity2 = 0.9068996821171089;   // pi sqrt(3) / 6
inline constexpr double kPackingDensity4 = 0.6168502750680849;   // pi^2 / 16

/// m unit vectors on the sphere S^d together with the achieved minimal
/// pairwise angle.
struct SpherePoints {
    std::vector<VectorR> points;  // each of dimension d + 1, unit norm
    double min_angle = 0.0;
};

enum class Regime { Exact, Asymptotic };

struct OraclePrediction {
    double tau = 1.0;
    double action = 0.0;
    double boundedness = 0.0;
    Regime regime = Regime::Exact;
};

struct LabeledPrediction {
    std::string label;
    OraclePrediction prediction;
};

/// Lagrangian of an isotropic pair at radii (tau, tau2):
/// (t^2-1)^{3/2}(t'^2-1)^{3/2}/(12 t t') - t^2 t'^2/12 + (t^2+t'^2)/8.
/// Minimum 1/6 at (1, 1).
double iso_lagrangian(double tau, double tau2);

/// Max-min-angle point sets by repulsion ascent (5 restarts, best kept);
/// d must be 2 or 4. Not guaranteed globally optimal.
SpherePoints tammes_points(int m, int d, std::uint64_t seed);

/// Discrete Dirac sphere on S^2 (f=2, n=1): Tammes points pushed to Bloch
/// operators at the radius tau with cos(min_angle) = 1 - 2/tau^2, equal
/// weights. Exact action tau^2/(2m) while causally trivial.
std::pair<Configuration, OraclePrediction> dirac2d_config(int m, std::uint64_t seed);

/// Closed-form pair Lagrangian of the 4D Dirac sphere at angle theta:
/// (tau^2/64)(1+cos)(2 - tau^2 (1-cos)) below the cutoff angle, else 0.
double dirac4d_lagrangian(double tau, double theta);

/// The five 4x4 Euclidean Dirac matrices used by dirac4d_config.
MatrixC dirac_gamma(int k);

/// Discrete Dirac sphere on S^4 (f=4, n=2) via F(x) = (tau sum x_i g_i + 1)/4.
/// Exact action tau^2/(16m) while causally trivial; every operator has
/// eigenvalues (1 +- tau)/4 with multiplicity two.
std::pair<Configuration, OraclePrediction> dirac4d_config(int m, std::uint64_t seed);

/// m operators of spectrum (1/n x n, 0...) on pairwise orthogonal images,
/// equal weights; the action attains the lower bound 1/(2 m n^3).
Configuration orthogonal_min_config(int n, int f, int m);

/// Rank-one equal-weight floor 1/(f(f+1)).
double welch_floor(int f);

/// The four-point symmetric rank-one configuration on C^2 attaining the
/// Welch floor 1/6.
Configuration sic_tetrahedron();

/// Weights tau_i^{-2} / sum tau_j^{-2}; second member is the resulting
/// causally trivial action (1/2) / sum tau_j^{-2}.
std::pair<VectorR, double> optimal_weights(const VectorR& taus);

struct TrivialityReport {
    bool trivial = true;
    std::vector<std::pair<int, int>> offending;  // i < j with off-diagonal L >= 1e-10
};
TrivialityReport is_causally_trivial(const Configuration& config);

/// Local-minimality hypotheses for an f=2 causally trivial configuration:
/// per point, the number k of lightlike partners, the spectral condition
/// tau >= sqrt(k/(k-2)) for k >= 3, and a sampled angular-coverage test.
struct LocalMinReport {
    struct PointVerdict {
        int lightlike_partners = 0;
        bool hypothesis_met = false;  // k >= 3
        bool tau_ok = false;
        bool angular_ok = false;
        bool pass = false;
    };
    std::vector<PointVerdict> points;
    bool all_pass = false;
};
LocalMinReport local_min_check(const Configuration& config);

/// Applicable analytic predictions (floors and asymptotes) for a regime.
std::vector<LabeledPrediction> asymptotic_table(int n, int f, int m);

}  // namespace cfs

#endif  // CFS_ORACLES_HPP
