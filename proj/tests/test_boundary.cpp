#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace halfline;
using namespace halfline::testing;

namespace {

cmat scalar(cplx v) { return cmat::Constant(1, 1, v); }

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

void check_same_multiset(const std::vector<double>& x, const std::vector<double>& y, double tol) {
    REQUIRE(x.size() == y.size());
    const auto a = sorted(x), b = sorted(y);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol);
}

} // namespace

TEST_SUITE("boundary") {

TEST_CASE("validate_pair examples") {
    CHECK_NOTHROW(validate_pair(cmat::Zero(2, 2), cmat::Identity(2, 2)));
    CHECK_NOTHROW(validate_pair(scalar(1.0), scalar(1.0)));
    CHECK_THROWS_WITH_AS(validate_pair(scalar(0.0), scalar(0.0)), doctest::Contains("RankDeficient"), Error);
}

TEST_CASE("validate_pair rejects non-selfadjoint and mismatched pairs") {
    CHECK_THROWS_WITH_AS(validate_pair(scalar(1.0), scalar(cplx(0.0, 1.0))),
                         doctest::Contains("SelfadjointnessViolated"), Error);
    CHECK_THROWS_WITH_AS(validate_pair(cmat::Zero(2, 2), cmat::Identity(3, 3)),
                         doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("E examples") {
    const cmat e = compute_E(validate_pair(cmat::Zero(2, 2), cmat::Identity(2, 2)));
    CHECK(row_sum_norm(e - cmat::Identity(2, 2)) < 1e-15);
    const cmat r = compute_E(validate_pair(scalar(1.0), scalar(1.0)));
    CHECK(r(0, 0).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("(B +- iA) E^-2 (B^dagger -+ iA^dagger) is the identity for random pairs") {
    Gen g(21);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = g.integer(1, 4);
        const BoundaryPair bp = g.pair(n);
        const cmat e = compute_E(bp);
        const cmat e2inv = (e * e).inverse();
        const cmat id = cmat::Identity(n, n);
        CHECK(row_sum_norm((bp.b + kI * bp.a) * e2inv * (bp.b.adjoint() - kI * bp.a.adjoint()) - id) <= 1e-9);
        CHECK(row_sum_norm((bp.b - kI * bp.a) * e2inv * (bp.b.adjoint() + kI * bp.a.adjoint()) - id) <= 1e-9);
        CHECK(row_sum_norm((bp.b + kI * bp.a).inverse() - e2inv * (bp.b.adjoint() - kI * bp.a.adjoint())) <= 1e-9);
        CHECK(unitarity_defect(compute_U(bp)) <= 1e-10);
    }
}

TEST_CASE("U examples") {
    CHECK(row_sum_norm(compute_U(validate_pair(cmat::Zero(2, 2), cmat::Identity(2, 2))) - cmat::Identity(2, 2)) <
          1e-15);
    CHECK(std::abs(compute_U(validate_pair(scalar(-1.0), scalar(0.0)))(0, 0) - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(compute_U(validate_pair(scalar(1.0), scalar(1.0)))(0, 0) - cplx(0.0, -1.0)) < 1e-15);
}

TEST_CASE("canonicalize examples") {
    const auto d = canonicalize(validate_pair(cmat::Zero(2, 2), cmat::Identity(2, 2)));
    CHECK(d.theta == std::vector<double>{kPi, kPi});
    CHECK(d.n_dirichlet == 2);
    CHECK(d.n_mixed == 0);
    CHECK(d.n_neumann == 0);

    const auto r = canonicalize(validate_pair(scalar(1.0), scalar(1.0)));
    CHECK(r.theta[0] == doctest::Approx(3 * kPi / 4).epsilon(1e-14));
    CHECK(r.n_mixed == 1);

    cmat a = cmat::Zero(2, 2), b = cmat::Zero(2, 2);
    a(1, 1) = -1.0;
    b(0, 0) = 1.0;
    const auto dn = canonicalize(validate_pair(a, b));
    CHECK(dn.theta == std::vector<double>{kPi, kPi / 2});
    CHECK(dn.n_dirichlet == 1);
    CHECK(dn.n_neumann == 1);
    CHECK(dn.channel(0) == ChannelType::Dirichlet);
    CHECK(dn.channel(1) == ChannelType::Neumann);
}

TEST_CASE("canonical data reconstructs the theta-form for random pairs") {
    Gen g(22);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = g.integer(1, 4);
        const BoundaryPair bp = g.pair(n);
        const CanonicalBoundary cb = canonicalize(bp);
        CHECK(reconstruction_residual(bp, cb) <= 1e-9);
        CHECK(unitarity_defect(cb.m) <= 1e-10);
        CHECK(cb.n_mixed + cb.n_dirichlet + cb.n_neumann == n);
        for (std::size_t j = 0; j < cb.theta.size(); ++j) {
            const double t = cb.theta[j];
            switch (cb.channel(j)) {
            case ChannelType::Mixed: CHECK((t > 0.0 && t < kPi && t != kPi / 2)); break;
            case ChannelType::Dirichlet: CHECK(t == kPi); break;
            case ChannelType::Neumann: CHECK(t == kPi / 2); break;
            }
        }
    }
}

TEST_CASE("theta multiset is invariant under right multiplication and conjugation") {
    Gen g(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = g.integer(1, 4);
        const BoundaryPair bp = g.pair(n);
        const auto base = canonicalize(bp);
        const auto right = canonicalize(right_multiply(bp, g.invertible(n)));
        const auto conj = canonicalize(conjugate(bp, g.unitary(n)));
        check_same_multiset(base.theta, right.theta, 1e-8);
        check_same_multiset(base.theta, conj.theta, 1e-8);
        CHECK(right.n_dirichlet == base.n_dirichlet);
        CHECK(conj.n_neumann == base.n_neumann);
    }
}

TEST_CASE("Dirichlet and Neumann pairs") {
    for (Eigen::Index n = 1; n <= 4; ++n) {
        const auto d = canonicalize(validate_pair(cmat::Zero(n, n), cmat::Identity(n, n)));
        CHECK(d.n_dirichlet == n);
        for (double t : d.theta) CHECK(t == kPi);
        const auto m = canonicalize(validate_pair(-cmat::Identity(n, n), cmat::Zero(n, n)));
        CHECK(m.n_neumann == n);
        for (double t : m.theta) CHECK(t == kPi / 2);
    }
}

TEST_CASE("a nearly Dirichlet channel is classified Dirichlet") {
    const double eps = 1e-11;
    const auto a = canonicalize(validate_pair(scalar(-std::sin(eps)), scalar(std::cos(eps))));
    CHECK(a.n_dirichlet == 1);
    CHECK(a.theta[0] == kPi);
    const auto b = canonicalize(validate_pair(scalar(std::sin(eps)), scalar(-std::cos(eps))));
    CHECK(b.n_dirichlet == 1);
}

TEST_CASE("transform examples") {
    Gen g(24);
    const BoundaryPair bp = g.pair(3);
    const BoundaryPair same = transform_pair(bp, cmat::Identity(3, 3), cmat::Identity(3, 3), cmat::Identity(3, 3));
    CHECK(row_sum_norm(same.a - bp.a) == 0.0);
    CHECK(row_sum_norm(same.b - bp.b) == 0.0);

    const BoundaryPair d = validate_pair(cmat::Zero(2, 2), cmat::Identity(2, 2));
    const BoundaryPair d2 = right_multiply(d, 2.0 * cmat::Identity(2, 2));
    CHECK(row_sum_norm(d2.b - 2.0 * cmat::Identity(2, 2)) == 0.0);
    CHECK(row_sum_norm(compute_U(d2) - compute_U(d)) < 1e-15);
    CHECK_NOTHROW(validate_pair(d2.a, d2.b));

    cmat singular = cmat::Identity(2, 2);
    singular(1, 1) = 0.0;
    CHECK_THROWS_WITH_AS(right_multiply(d, singular), doctest::Contains("SingularTransform"), Error);
}

TEST_CASE("transformed pairs stay valid") {
    Gen g(25);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = g.integer(1, 4);
        const BoundaryPair bp = g.pair(n);
        const BoundaryPair t = transform_pair(bp, g.unitary(n), g.invertible(n), g.invertible(n));
        CHECK_NOTHROW(validate_pair(t.a, t.b));
    }
}

}
