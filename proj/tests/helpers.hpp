#ifndef CFS_TESTS_HELPERS_HPP
#define CFS_TESTS_HELPERS_HPP

#include "cfs/operators.hpp"
#include "cfs/parametrize.hpp"
#include "cfs/rng.hpp"

namespace cfs::testing {

// Random admissible point of any (n, f) through the decoder, with spreads
// wide enough to cover the manifold.
inline OperatorPoint random_point(Rng& rng, int n, int f, double mu0 = 0.8) {
    const Shape shape{n, f, 1};
    const auto seed = static_cast<std::uint64_t>(rng.uniform() * 1e15);
    const UnconstrainedParams params = init_random(shape, seed, 0.5, 0.5, mu0);
    return decode(params).points.front();
}

inline Eigen::Vector3d random_direction(Rng& rng) {
    Eigen::Vector3d v;
    do {
        v << rng.normal(), rng.normal(), rng.normal();
    } while (v.norm() < 1e-6);
    return v.normalized();
}

inline BlochCoords random_bloch(Rng& rng, double tau_max = 3.0) {
    return BlochCoords{rng.uniform(1.0, tau_max), random_direction(rng)};
}

}  // namespace cfs::testing

#endif  // CFS_TESTS_HELPERS_HPP
