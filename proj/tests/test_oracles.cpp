#include "doctest.h"

#include <cmath>

#include "cfs/action.hpp"
#include "cfs/oracles.hpp"
#include "helpers.hpp"

using namespace cfs;

namespace {

// The geometric octahedron at radius sqrt(2), where the minimal angle pi/2
// coincides with the light-cone opening exactly.
Configuration exact_octahedron() {
    Configuration config;
    const double tau = std::sqrt(2.0);
    for (int axis = 0; axis < 3; ++axis)
        for (int sign : {1, -1}) {
            Eigen::Vector3d dir = Eigen::Vector3d::Zero();
            dir[axis] = sign;
            config.points.push_back(f2_from_bloch({tau, dir}));
        }
    config.weights = VectorR::Constant(6, 1.0 / 6.0);
    return config;
}

}  // namespace

TEST_SUITE("oracles") {

TEST_CASE("isotropic lagrangian values and floor") {
    CHECK(iso_lagrangian(1.0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(iso_lagrangian(2.0, 2.0) == doctest::Approx(11.0 / 48.0).epsilon(1e-12));
    for (double tau : {1.3, 2.0, 5.5})
        CHECK(iso_lagrangian(tau, tau) ==
              doctest::Approx(0.25 - 1.0 / (12.0 * tau * tau)).epsilon(1e-12));

    Rng rng(2);
    for (int t = 0; t < 10000; ++t) {
        const double a = rng.uniform(1.0, 20.0);
        const double b = rng.uniform(1.0, 20.0);
        CHECK(iso_lagrangian(a, b) > 1.0 / 6.0);
    }
}

TEST_CASE("repulsion point sets reach the known small optima") {
    const SpherePoints two = tammes_points(2, 2, 1);
    CHECK(two.min_angle == doctest::Approx(M_PI).epsilon(1e-6));

    const SpherePoints four = tammes_points(4, 2, 1);
    CHECK(four.min_angle == doctest::Approx(std::acos(-1.0 / 3.0)).epsilon(1e-3));

    const SpherePoints six = tammes_points(6, 2, 1);
    CHECK(six.min_angle == doctest::Approx(M_PI_2).epsilon(1e-3));

    for (const auto& p : six.points) CHECK(std::abs(p.norm() - 1.0) < 1e-12);
}

TEST_CASE("2d dirac sphere") {
    const auto [two, pred2] = dirac2d_config(2, 1);
    CHECK(pred2.tau == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(causal_action(two).action == doctest::Approx(0.25).epsilon(1e-6));

    const auto [six, pred6] = dirac2d_config(6, 1);
    CHECK(pred6.tau == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    CHECK(pred6.action == doctest::Approx(1.0 / 6.0).epsilon(1e-3));
    // The exact-action formula holds for the achieved radius regardless of
    // how good the packing is.
    CHECK(causal_action(six).action == doctest::Approx(pred6.action).epsilon(1e-10));
    CHECK(is_causally_trivial(six).trivial);
}

TEST_CASE("4d dirac matrices and pair lagrangian") {
    for (int k = 1; k <= 5; ++k) {
        const MatrixC g = dirac_gamma(k);
        CHECK((g * g - MatrixC::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
        for (int l = 1; l < k; ++l)
            CHECK((g * dirac_gamma(l) + dirac_gamma(l) * g).cwiseAbs().maxCoeff() < 1e-14);
    }

    const double tau = 1.8;
    CHECK(dirac4d_lagrangian(tau, 0.0) == doctest::Approx(tau * tau / 16.0).epsilon(1e-12));
    const double cutoff = std::acos(1.0 - 2.0 / (tau * tau));
    CHECK(dirac4d_lagrangian(tau, cutoff + 0.01) == 0.0);
    CHECK(dirac4d_lagrangian(1.0, 1.0) ==
          doctest::Approx(std::pow(1.0 + std::cos(1.0), 2) / 64.0).epsilon(1e-12));
}

TEST_CASE("4d dirac sphere operators") {
    const auto [config, pred] = dirac4d_config(8, 1);
    for (const auto& p : config.points) {
        // Eigenvalues (1 +- tau)/4, each twice.
        CHECK(p.eigenvalues[0] == doctest::Approx((1.0 - pred.tau) / 4.0).epsilon(1e-10));
        CHECK(p.eigenvalues[1] == doctest::Approx((1.0 - pred.tau) / 4.0).epsilon(1e-10));
        CHECK(p.eigenvalues[2] == doctest::Approx((1.0 + pred.tau) / 4.0).epsilon(1e-10));
        CHECK(p.eigenvalues[3] == doctest::Approx((1.0 + pred.tau) / 4.0).epsilon(1e-10));
    }
    CHECK(causal_action(config).action == doctest::Approx(pred.action).epsilon(1e-10));
    CHECK(pred.action == doctest::Approx(pred.tau * pred.tau / (16.0 * 8)).epsilon(1e-12));
    CHECK(is_causally_trivial(config).trivial);
}

TEST_CASE("orthogonal-image floor configurations") {
    CHECK(causal_action(orthogonal_min_config(1, 2, 2)).action ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(causal_action(orthogonal_min_config(2, 8, 2)).action ==
          doctest::Approx(1.0 / 32.0).epsilon(1e-12));
    CHECK(causal_action(orthogonal_min_config(1, 4, 4)).action ==
          doctest::Approx(0.125).epsilon(1e-12));
    CHECK_THROWS_AS(orthogonal_min_config(1, 3, 4), DimensionTooSmallError);
    CHECK(is_causally_trivial(orthogonal_min_config(1, 4, 4)).trivial);
}

TEST_CASE("welch floor and the symmetric tetrahedron attaining it") {
    CHECK(welch_floor(2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(welch_floor(3) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(causal_action(sic_tetrahedron()).action ==
          doctest::Approx(welch_floor(2)).epsilon(1e-10));
}

TEST_CASE("optimal weights") {
    VectorR equal = VectorR::Constant(4, 1.7);
    const auto [we, ae] = optimal_weights(equal);
    for (int i = 0; i < 4; ++i) CHECK(we[i] == doctest::Approx(0.25).epsilon(1e-14));

    VectorR pair(2);
    pair << 1.0, std::sqrt(2.0);
    const auto [wp, ap] = optimal_weights(pair);
    CHECK(wp[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(wp[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(ap == doctest::Approx(0.5 / 1.5).epsilon(1e-12));

    VectorR triple(3);
    triple << 1.0, 1.0, std::sqrt(2.0);
    const auto [wt, at] = optimal_weights(triple);
    CHECK(wt[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(wt[2] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("causal triviality detection") {
    CHECK(is_causally_trivial(orthogonal_min_config(1, 2, 2)).trivial);

    Configuration twins;
    twins.points.push_back(f2_from_bloch({1.5, Eigen::Vector3d(0, 0, 1)}));
    twins.points.push_back(f2_from_bloch({1.5, Eigen::Vector3d(0, 0, 1)}));
    twins.weights = VectorR::Constant(2, 0.5);
    const TrivialityReport report = is_causally_trivial(twins);
    CHECK_FALSE(report.trivial);
    REQUIRE(report.offending.size() == 1);
    CHECK(report.offending[0] == std::pair<int, int>(0, 1));
}

TEST_CASE("local-minimum hypotheses on the exact octahedron") {
    const LocalMinReport report = local_min_check(exact_octahedron());
    REQUIRE(report.points.size() == 6);
    for (const auto& v : report.points) {
        CHECK(v.lightlike_partners == 4);  // the four equatorial neighbors
        CHECK(v.hypothesis_met);
        CHECK(v.tau_ok);  // tau = sqrt(2) = sqrt(k/(k-2)) with equality
        CHECK(v.angular_ok);
        CHECK(v.pass);
    }
    CHECK(report.all_pass);
}

TEST_CASE("local-minimum check verdicts below the hypothesis threshold") {
    // Antipodal tau = 1 pair: each point has exactly one lightlike partner.
    Configuration pair;
    pair.points.push_back(f2_from_bloch({1.0, Eigen::Vector3d(0, 0, 1)}));
    pair.points.push_back(f2_from_bloch({1.0, Eigen::Vector3d(0, 0, -1)}));
    pair.weights = VectorR::Constant(2, 0.5);
    const LocalMinReport few = local_min_check(pair);
    CHECK(few.points[0].lightlike_partners == 1);
    CHECK_FALSE(few.points[0].hypothesis_met);
    CHECK_FALSE(few.all_pass);

    // Strictly spacelike pair: no lightlike partners, angular coverage fails.
    Configuration isolated;
    isolated.points.push_back(f2_from_bloch({2.0, Eigen::Vector3d(0, 0, 1)}));
    isolated.points.push_back(
        f2_from_bloch({2.0, Eigen::Vector3d(std::sin(2.0), 0, std::cos(2.0))}));
    isolated.weights = VectorR::Constant(2, 0.5);
    const LocalMinReport none = local_min_check(isolated);
    CHECK(none.points[0].lightlike_partners == 0);
    CHECK_FALSE(none.points[0].angular_ok);
    CHECK_FALSE(none.all_pass);
}

TEST_CASE("asymptotic prediction table") {
    bool found = false;
    for (const auto& row : asymptotic_table(1, 8, 4))
        if (row.prediction.regime == Regime::Exact &&
            std::abs(row.prediction.action - 1.0 / 8.0) < 1e-14)
            found = true;
    CHECK(found);

    found = false;
    for (const auto& row : asymptotic_table(2, 16, 4))
        if (row.prediction.regime == Regime::Exact &&
            std::abs(row.prediction.action - 1.0 / 64.0) < 1e-14)
            found = true;
    CHECK(found);

    found = false;
    for (const auto& row : asymptotic_table(1, 2, 256))
        if (row.prediction.regime == Regime::Asymptotic &&
            std::abs(row.prediction.action - std::sqrt(3.0) / (4.0 * M_PI)) < 1e-14)
            found = true;
    CHECK(found);
}

TEST_CASE("packing density constants") {
    CHECK(kPackingDensity2 == doctest::Approx(M_PI * std::sqrt(3.0) / 6.0).epsilon(1e-15));
    CHECK(kPackingDensity4 == doctest::Approx(M_PI * M_PI / 16.0).epsilon(1e-15));
}

}  // TEST_SUITE
