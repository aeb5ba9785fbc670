#include "doctest.h"

#include "cfs/operators.hpp"
#include "helpers.hpp"

using namespace cfs;

TEST_SUITE("operators") {

TEST_CASE("validate_point accepts projectors and spread spectra") {
    MatrixC proj = MatrixC::Zero(2, 2);
    proj(0, 0) = 1.0;
    const OperatorPoint p = validate_point(proj, 1);
    CHECK(p.f == 2);
    CHECK(p.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));

    MatrixC spread = MatrixC::Zero(2, 2);
    spread(0, 0) = 1.5;
    spread(1, 1) = -0.5;
    const OperatorPoint q = validate_point(spread, 1);
    CHECK(q.eigenvalues[0] == doctest::Approx(-0.5));
    CHECK(q.eigenvalues[1] == doctest::Approx(1.5));
}

TEST_CASE("validate_point rejects bad matrices") {
    MatrixC two_pos = MatrixC::Zero(3, 3);
    two_pos(0, 0) = 1.0;
    two_pos(1, 1) = 1.0;
    two_pos(2, 2) = -1.0;
    CHECK_THROWS_AS(validate_point(two_pos, 1), SignatureViolationError);

    MatrixC bad_trace = MatrixC::Zero(2, 2);
    bad_trace(0, 0) = 2.0;
    CHECK_THROWS_AS(validate_point(bad_trace, 1), TraceNotOneError);

    MatrixC non_herm = MatrixC::Zero(2, 2);
    non_herm(0, 0) = 1.0;
    non_herm(0, 1) = Complex(0.5, 0.0);  // no matching (1,0) entry
    CHECK_THROWS_AS(validate_point(non_herm, 1), NotHermitianError);

    CHECK_THROWS(validate_point(MatrixC::Zero(2, 3), 1));
}

TEST_CASE("bloch encoding hits the pinned matrices") {
    const OperatorPoint e3 = f2_from_bloch({1.0, Eigen::Vector3d(0, 0, 1)});
    CHECK(std::abs(e3.matrix(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(e3.matrix(1, 1)) < 1e-14);

    const OperatorPoint tau2 = f2_from_bloch({2.0, Eigen::Vector3d(0, 0, 1)});
    CHECK(std::abs(tau2.matrix(0, 0) - 1.5) < 1e-14);
    CHECK(std::abs(tau2.matrix(1, 1) + 0.5) < 1e-14);

    const OperatorPoint e1 = f2_from_bloch({1.0, Eigen::Vector3d(1, 0, 0)});
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(std::abs(e1.matrix(r, c) - 0.5) < 1e-14);
}

TEST_CASE("bloch eigenvalues are (1 +- tau)/2") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        const BlochCoords coords = testing::random_bloch(rng);
        const OperatorPoint p = f2_from_bloch(coords);
        CHECK(std::abs(p.eigenvalues[0] - 0.5 * (1.0 - coords.tau)) < 1e-12);
        CHECK(std::abs(p.eigenvalues[1] - 0.5 * (1.0 + coords.tau)) < 1e-12);
    }
}

TEST_CASE("bloch decoding inverts and rejects the open unit ball") {
    const BlochCoords back = f2_to_bloch(f2_from_bloch({1.0, Eigen::Vector3d(0, 0, 1)}));
    CHECK(back.tau == doctest::Approx(1.0));
    CHECK(back.direction.z() == doctest::Approx(1.0));

    MatrixC half = MatrixC::Constant(2, 2, Complex(0.5, 0.0));
    const BlochCoords ex = f2_to_bloch(validate_point(half, 1));
    CHECK(ex.tau == doctest::Approx(1.0));
    CHECK(ex.direction.x() == doctest::Approx(1.0));

    // diag(0.6, 0.4) sits inside the open unit ball (tau = 0.2): not an
    // admissible point, so it is assembled by hand rather than validated.
    OperatorPoint inside;
    inside.matrix = MatrixC::Zero(2, 2);
    inside.matrix(0, 0) = 0.6;
    inside.matrix(1, 1) = 0.4;
    inside.f = 2;
    inside.n = 1;
    inside.eigenvalues.resize(2);
    inside.eigenvalues << 0.4, 0.6;
    CHECK_THROWS_AS(f2_to_bloch(inside), TauBelowOneError);

    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const BlochCoords coords = testing::random_bloch(rng);
        const BlochCoords round = f2_to_bloch(f2_from_bloch(coords));
        CHECK(std::abs(round.tau - coords.tau) < 1e-10);
        CHECK((round.direction - coords.direction).norm() < 1e-10);
    }
}

TEST_CASE("configuration validation guards the simplex and shared shape") {
    Configuration config;
    config.points.push_back(f2_from_bloch({1.0, Eigen::Vector3d(0, 0, 1)}));
    config.points.push_back(f2_from_bloch({1.0, Eigen::Vector3d(0, 0, -1)}));
    config.weights.resize(2);
    config.weights << 0.5, 0.5;
    CHECK_NOTHROW(config.validate());

    config.weights << 0.7, 0.5;
    CHECK_THROWS(config.validate());

    config.weights << 0.5, 0.5;
    MatrixC wide = MatrixC::Zero(3, 3);
    wide(0, 0) = 1.0;
    config.points[1] = validate_point(wide, 1);
    CHECK_THROWS(config.validate());
}

}  // TEST_SUITE
