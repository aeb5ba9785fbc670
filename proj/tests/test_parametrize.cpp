#include "doctest.h"

#include <cmath>

#include "cfs/gradient.hpp"
#include "cfs/parametrize.hpp"
#include "helpers.hpp"

using namespace cfs;

TEST_SUITE("parametrize") {

TEST_CASE("degree-of-freedom bookkeeping") {
    const DofReport a = dof(1, 2, 2);
    CHECK(a.d_unconstrained == 22);
    CHECK(a.d_effective == 7);

    const DofReport b = dof(2, 4, 1);
    CHECK(b.d_unconstrained == 37);
    CHECK(b.d_effective == 15);

    CHECK(dof(2, 4, 1024).d_unconstrained == 37888);

    // eliminated = 1 + m + m 2n(2n+1) for every shape.
    for (int n : {1, 2})
        for (int m : {1, 2, 5})
            for (int f : {2 * n, 2 * n + 1, 2 * n + 3}) {
                const DofReport r = dof(n, f, m);
                CHECK(r.eliminated == 1 + m + m * 2 * n * (2 * n + 1));
            }

    CHECK_THROWS_AS(dof(2, 3, 1), DimensionTooSmallError);
}

TEST_CASE("pack and unpack are exact inverses") {
    Rng rng(5);
    for (const Shape shape : {Shape{1, 2, 3}, Shape{1, 4, 2}, Shape{2, 4, 2}, Shape{2, 6, 1}}) {
        const UnconstrainedParams p = init_random(shape, 99, 0.3, 0.3, 0.7);
        const VectorR flat = p.pack();
        CHECK(flat.size() == dof_unconstrained(shape));
        const VectorR again = UnconstrainedParams::unpack(flat, shape).pack();
        CHECK((flat - again).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK_THROWS(UnconstrainedParams::unpack(VectorR::Zero(5), Shape{1, 2, 2}));
}

TEST_CASE("decode pinned examples") {
    Shape shape{1, 2, 3};
    UnconstrainedParams p = init_random(shape, 1, 0.0, 0.0, 1.0);
    // Equal c-tilde: exactly uniform weights.
    const Configuration uniform = decode(p);
    for (int i = 0; i < 3; ++i) CHECK(uniform.weights[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    // mu+ = log 2, mu- = 0: Gamma = 1, spectrum (2, -1), tau = 3.
    p.mu_plus.setConstant(std::log(2.0));
    p.mu_minus.setConstant(0.0);
    for (auto& b : p.b1) b.setZero();
    for (auto& b : p.b2) b.setZero();
    const Configuration diag = decode(p);
    CHECK(diag.points[0].eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(diag.points[0].eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    // Zero generator: the operator stays diagonal.
    CHECK(std::abs(diag.points[0].matrix(0, 1)) < 1e-14);
    CHECK(std::abs(diag.points[0].matrix(0, 0) - Complex(2.0, 0.0)) < 1e-14);
}

TEST_CASE("decode output always validates") {
    Rng rng(13);
    for (const Shape shape : {Shape{1, 3, 2}, Shape{2, 5, 2}}) {
        for (int t = 0; t < 20; ++t) {
            const auto seed = static_cast<std::uint64_t>(rng.uniform() * 1e9);
            const Configuration config = decode(init_random(shape, seed, 0.5, 0.5, 0.6));
            CHECK_NOTHROW(config.validate());
            for (const auto& pt : config.points) CHECK_NOTHROW(validate_point(pt.matrix, shape.n));
        }
    }
}

TEST_CASE("sign-flip rule and degenerate trace") {
    Shape shape{1, 2, 1};
    UnconstrainedParams p = init_random(shape, 2, 0.2, 0.2, 0.5);
    const Configuration direct = decode(p);

    // Swapping the exponent roles negates Gamma; the decoded operator is the
    // same up to the relabeling performed by the flip rule.
    UnconstrainedParams swapped = p;
    swapped.mu_plus.swap(swapped.mu_minus);
    const Configuration flipped = decode(swapped);
    CHECK((direct.points[0].matrix - flipped.points[0].matrix).cwiseAbs().maxCoeff() < 1e-12);

    UnconstrainedParams degenerate = p;
    degenerate.mu_minus = degenerate.mu_plus;
    CHECK_THROWS_AS(decode(degenerate), DegenerateTraceError);
}

TEST_CASE("diagonal of b1 is gauge and never reaches the operator") {
    Shape shape{1, 3, 2};
    UnconstrainedParams p = init_random(shape, 4, 0.3, 0.3, 0.8);
    UnconstrainedParams q = p;
    for (auto& b : q.b1) b.diagonal().array() += Complex(0.37, -1.2);
    const Configuration a = decode(p), b = decode(q);
    for (int i = 0; i < 2; ++i)
        CHECK((a.points[i].matrix - b.points[i].matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("unitary_from_generator") {
    const MatrixC id = unitary_from_generator(MatrixC::Zero(2, 2), MatrixC::Zero(2, 0));
    CHECK((id - MatrixC::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    // exp(-i pi sigma1) = -identity.
    MatrixC b1 = MatrixC::Zero(2, 2);
    b1(0, 1) = Complex(M_PI, 0.0);  // b1 + b1* = pi sigma1
    const MatrixC u = unitary_from_generator(b1, MatrixC::Zero(2, 1));
    CHECK(std::abs(u(0, 0) + 1.0) < 1e-12);
    CHECK(std::abs(u(1, 1) + 1.0) < 1e-12);
    CHECK(std::abs(u(2, 2) - 1.0) < 1e-12);

    Rng rng(6);
    MatrixC rb1(4, 4), rb2(4, 1);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) rb1(r, c) = Complex(rng.normal(), rng.normal());
        rb2(r, 0) = Complex(rng.normal(), rng.normal());
    }
    const MatrixC v = unitary_from_generator(rb1, rb2);
    CHECK((v * v.adjoint() - MatrixC::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("init_random is deterministic and matches the draw spec") {
    const Shape shape{2, 5, 3};
    const VectorR a = init_random(shape, 123, 0.01, 0.01, 0.4).pack();
    const VectorR b = init_random(shape, 123, 0.01, 0.01, 0.4).pack();
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    const VectorR c = init_random(shape, 124, 0.01, 0.01, 0.4).pack();
    CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);

    // Degenerate spreads pin the means: mu+ = log(mu0 + 1/n), mu- = log(mu0).
    const double mu0 = 0.4;
    const UnconstrainedParams p = init_random(shape, 9, 0.0, 0.0, mu0);
    CHECK(p.mu_plus(0, 0) == doctest::Approx(std::log(mu0 + 0.5)).epsilon(1e-14));
    CHECK(p.mu_minus(2, 1) == doctest::Approx(std::log(mu0)).epsilon(1e-14));
    for (const auto& blk : p.b1)
        CHECK(blk.cwiseAbs().maxCoeff() <= M_PI * std::sqrt(2.0));
}

TEST_CASE("default initial scale") {
    CHECK(default_mu0(1, 4) == doctest::Approx(0.0626).epsilon(1e-2));
    CHECK(default_mu0(1, 1) == doctest::Approx(0.01));  // formula negative, floored
    CHECK(default_mu0(2, 1024) ==
          doctest::Approx(0.25 * (std::pow(3.0 * 1024, 0.25) / std::sqrt(M_PI) - 1.0)));
    CHECK_THROWS_AS(default_mu0(3, 10), UnsupportedSpinError);
}

TEST_CASE("non-finite parameters are rejected") {
    Shape shape{1, 2, 1};
    UnconstrainedParams p = init_random(shape, 3, 0.1, 0.1, 0.5);
    p.c_tilde[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(decode(p), NonFiniteError);
}

}  // TEST_SUITE
