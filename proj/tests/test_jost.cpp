#include <doctest.h>

#include "halfline/jost.hpp"
#include "halfline/scattering.hpp"
#include "support.hpp"

using namespace halfline;
using namespace halfline::testing;

namespace {

double wronskian_norm(const JostValues& a, const JostValues& b, const cmat& target) {
    return row_sum_norm(wronskian(a.f.adjoint(), a.fp.adjoint(), b.f, b.fp) - target);
}

} // namespace

TEST_SUITE("jost") {

TEST_CASE("free Jost values at the origin") {
    const PotentialModel z = PotentialModel::zero(2);
    for (cplx k : {cplx(0.0), cplx(0.4), cplx(-3.0), cplx(0.0, 2.0), cplx(1.0, 1.0)}) {
        const JostValues v = jost_at_origin(z, k);
        CHECK(row_sum_norm(v.f - cmat::Identity(2, 2)) < 1e-15);
        CHECK(row_sum_norm(v.fp - kI * k * cmat::Identity(2, 2)) < 1e-15);
    }
}

TEST_CASE("Jost solution matches the transfer-matrix oracle") {
    const std::vector<PotentialModel> pots{scalar_well(4.0, kPi), scalar_well(2.0, 0.8), dense_potential()};
    for (const PotentialModel& p : pots) {
        for (cplx k : {cplx(0.0), cplx(0.3), cplx(-1.7), cplx(6.0), cplx(0.0, 0.9), cplx(0.0, 2.5), cplx(0.5, 0.5)}) {
            for (double x : {0.0, 0.35, 1.0, 2.0}) {
                const JostValues v = jost_solution(p, k, x);
                const cmat oracle = transfer_jost(p, k, x);
                const Eigen::Index n = p.dim();
                const double scale = 1.0 + row_sum_norm(oracle);
                CHECK(row_sum_norm(v.f - oracle.topRows(n)) <= 1e-8 * scale);
                CHECK(row_sum_norm(v.fp - oracle.bottomRows(n)) <= 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("Jost values at large k follow the first-order moment expansion") {
    const PotentialModel p = scalar_well(4.0, kPi);
    const MomentSet q = moments(p);
    std::vector<double> ks, res;
    for (double k : {32.0, 64.0, 128.0}) {
        const JostValues v = jost_at_origin(p, -k);
        const cmat model = cmat::Identity(1, 1) + (-q.q1() + q.q2(k)) / (kI * k);
        ks.push_back(k);
        res.push_back(row_sum_norm(v.f.adjoint() - model));
    }
    CHECK(-loglog_slope(ks, res) >= 1.9);
}

TEST_CASE("Jost matrix examples") {
    Gen g(41);
    const PotentialModel z1 = PotentialModel::zero(1);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = g.integer(1, 4);
        const BoundaryPair bp = g.pair(n);
        const PotentialModel z = PotentialModel::zero(n);
        for (cplx k : {cplx(0.1), cplx(1.0), cplx(10.0), cplx(0.0, 1.0), cplx(0.0, 2.0)})
            CHECK(row_sum_norm(jost_matrix(z, bp, k).J - (bp.b - kI * k * bp.a)) <= 1e-9);
    }
    const BoundaryPair neumann = theta_pair({kPi / 2});
    CHECK(std::abs(jost_matrix(z1, neumann, 2.0).J(0, 0) - cplx(0.0, 2.0)) < 1e-14);
    const BoundaryPair robin = validate_pair(cmat::Identity(1, 1), cmat::Identity(1, 1));
    for (double kappa : {0.1, 1.0, 5.0})
        CHECK(std::abs(jost_matrix(z1, robin, cplx(0.0, kappa)).J(0, 0) - (1.0 + kappa)) < 1e-14);
}

TEST_CASE("Jost evaluation stores the values at -k*") {
    const PotentialModel p = scalar_well(4.0, kPi);
    const BoundaryPair bp = theta_pair({kPi});
    const JostEvaluation e = jost_matrix(p, bp, 1.5);
    CHECK(row_sum_norm(e.f0 - jost_at_origin(p, -1.5).f) == 0.0);
    const JostEvaluation i = jost_matrix(p, bp, cplx(0.0, 1.2));
    CHECK(row_sum_norm(i.f0 - jost_at_origin(p, cplx(0.0, 1.2)).f) == 0.0);
    CHECK(e.err_est > 0.0);
}

TEST_CASE("regular solution of the free equation") {
    Gen g(42);
    const BoundaryPair bp = g.pair(2);
    const PotentialModel z = PotentialModel::zero(2);
    const std::vector<double> xs{0.0, 0.3, 1.1, 2.5};
    for (cplx k : {cplx(0.7), cplx(3.0), cplx(0.0, 1.4)}) {
        const RegularSolutionTrace t = regular_solution(z, bp, k, xs);
        CHECK(row_sum_norm(t.phi[0] - bp.a) == 0.0);
        CHECK(row_sum_norm(t.phip[0] - bp.b) == 0.0);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double x = xs[i];
            const cmat exact = bp.a * std::cos(k * x) + bp.b * (std::sin(k * x) / k);
            CHECK(row_sum_norm(t.phi[i] - exact) <= 1e-8 * (1.0 + row_sum_norm(exact)));
        }
    }
    const RegularSolutionTrace t0 = regular_solution(z, bp, 0.0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(row_sum_norm(t0.phi[i] - (bp.a + bp.b * xs[i])) <= 1e-9);
}

TEST_CASE("regular solution is even in k and matches the transfer oracle") {
    const PotentialModel p = dense_potential();
    const BoundaryPair bp = dense_pair();
    const std::vector<double> xs{0.0, 0.5, 0.7, 1.2, 3.0};
    for (double k : {0.4, 2.2}) {
        const RegularSolutionTrace a = regular_solution(p, bp, k, xs);
        const RegularSolutionTrace b = regular_solution(p, bp, -k, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            CHECK(row_sum_norm(a.phi[i] - b.phi[i]) <= 1e-12);
            const cmat oracle = transfer_regular(p, bp, k, xs[i]);
            CHECK(row_sum_norm(a.phi[i] - oracle.topRows(2)) <= 1e-8 * (1.0 + row_sum_norm(oracle)));
        }
    }
    CHECK_THROWS_WITH_AS(regular_solution(p, bp, 1.0, {0.5, 1.0}), doctest::Contains("BadGrid"), Error);
    CHECK_THROWS_WITH_AS(regular_solution(p, bp, 1.0, {0.0, 1.0, 1.0}), doctest::Contains("BadGrid"), Error);
}

TEST_CASE("physical solution examples") {
    const PotentialModel z = PotentialModel::zero(1);
    const BoundaryPair dirichlet = theta_pair({kPi});
    const BoundaryPair neumann = theta_pair({kPi / 2});
    for (double k : {0.5, 2.0}) {
        for (double x : {0.0, 0.3, 1.7}) {
            CHECK(std::abs(physical_solution(z, dirichlet, k, x)(0, 0) - (-2.0 * kI * std::sin(k * x))) < 1e-12);
            CHECK(std::abs(physical_solution(z, neumann, k, x)(0, 0) - 2.0 * std::cos(k * x)) < 1e-12);
            // The regular path integrates an ODE, so it carries integrator error.
            CHECK(std::abs(physical_solution(z, dirichlet, k, x, PhysicalPath::Regular)(0, 0) -
                           (-2.0 * kI * std::sin(k * x))) < 1e-9);
        }
    }
    CHECK_THROWS_WITH_AS(physical_solution(z, dirichlet, 0.0, 1.0), doctest::Contains("InvalidArgument"), Error);
    const BoundaryPair mixed = theta_pair({kPi / 2, kPi});
    CHECK_THROWS_WITH_AS(physical_solution(PotentialModel::zero(2), mixed, 1e-14, 1.0, PhysicalPath::Regular),
                         doctest::Contains("SingularJost"), Error);
}

TEST_CASE("both physical-solution paths agree on a well") {
    const PotentialModel p = scalar_well(4.0, kPi);
    const BoundaryPair bp = theta_pair({kPi / 3});
    const cmat a = physical_solution(p, bp, 1.0, 0.7, PhysicalPath::Jost);
    const cmat b = physical_solution(p, bp, 1.0, 0.7, PhysicalPath::Regular);
    CHECK(row_sum_norm(a - b) <= 1e-8);
}

TEST_CASE("Wronskian identities") {
    Gen g(43);
    for (const PotentialModel& p : {scalar_well(4.0, kPi), dense_potential(), ramp_potential()}) {
        const Eigen::Index n = p.dim();
        for (int trial = 0; trial < 4; ++trial) {
            const double k = g.uniform(0.2, 12.0);
            for (double x : {0.0, g.uniform(0.0, 1.0), g.uniform(1.0, 3.0)}) {
                const JostValues fk = jost_solution(p, k, x);
                const JostValues fm = jost_solution(p, -k, x);
                const cmat two_ik = 2.0 * kI * k * cmat::Identity(n, n);
                CHECK(wronskian_norm(fk, fk, two_ik) <= 100.0 * 2.0 * fk.err_est);
                CHECK(wronskian_norm(fm, fk, cmat::Zero(n, n)) <= 100.0 * (fk.err_est + fm.err_est));
            }
            const double kappa = g.uniform(0.2, 3.0);
            const JostValues fi = jost_solution(p, cplx(0.0, kappa), 0.3);
            CHECK(wronskian_norm(fi, fi, cmat::Zero(n, n)) <= 100.0 * 2.0 * fi.err_est);
        }
    }
}

TEST_CASE("regular solution is represented through Jost solutions") {
    for (const Problem& pr : regression_problems()) {
        const Eigen::Index n = pr.potential.dim();
        const std::vector<double> xs{0.0, 0.4, 1.0, 2.2, 3.5};
        for (double k : {0.5, 1.0, 2.0, 8.0}) {
            const RegularSolutionTrace t = regular_solution(pr.potential, pr.boundary, k, xs);
            const cmat j = jost_matrix(pr.potential, pr.boundary, k).J;
            const cmat jm = jost_matrix(pr.potential, pr.boundary, -k).J;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const cmat fp = jost_solution(pr.potential, k, xs[i]).f;
                const cmat fm = jost_solution(pr.potential, -k, xs[i]).f;
                const cmat rebuilt = (fp * jm - fm * j) / (2.0 * kI * k);
                INFO(pr.name << " k=" << k << " x=" << xs[i]);
                CHECK(row_sum_norm(t.phi[i] - rebuilt) <= 1e-7);
            }
            CHECK(n == pr.boundary.dim());
        }
    }
}

TEST_CASE("det J has zero winding around a square away from the imaginary axis") {
    const PotentialModel p = dense_potential();
    const BoundaryPair bp = dense_pair();
    const cplx corners[] = {cplx(1.5, 0.25), cplx(2.5, 0.25), cplx(2.5, 1.25), cplx(1.5, 1.25)};
    double total = 0.0;
    cplx last = jost_matrix(p, bp, corners[0]).J.determinant();
    for (int side = 0; side < 4; ++side) {
        for (int i = 1; i <= 64; ++i) {
            const cplx k = corners[side] + (corners[(side + 1) % 4] - corners[side]) * (i / 64.0);
            const cplx d = jost_matrix(p, bp, k).J.determinant();
            const double step = std::arg(d / last);
            CHECK(std::abs(step) < kPi / 2);
            total += step;
            last = d;
        }
    }
    CHECK(std::abs(total) < 1e-9);
}

TEST_CASE("block-diagonal problems give block-diagonal Jost matrices") {
    const PotentialModel pa = scalar_well(4.0, kPi), pb = scalar_well(1.0, 0.5);
    const BoundaryPair ba = theta_pair({kPi}), bb = theta_pair({kPi / 3});
    const PotentialModel p = direct_sum(pa, pb);
    const BoundaryPair bp = block_pair(ba, bb);
    for (cplx k : {cplx(0.5), cplx(3.0), cplx(0.0, 1.1)}) {
        const cmat j = jost_matrix(p, bp, k).J;
        CHECK(std::abs(j(0, 0) - jost_matrix(pa, ba, k).J(0, 0)) <= 1e-9);
        CHECK(std::abs(j(1, 1) - jost_matrix(pb, bb, k).J(0, 0)) <= 1e-9);
        CHECK(std::abs(j(0, 1)) <= 1e-9);
        CHECK(std::abs(j(1, 0)) <= 1e-9);
    }
}

TEST_CASE("spectral points") {
    CHECK(SpectralPoint(cplx(1.0, -1e-15)).real());
    CHECK(SpectralPoint(cplx(1.0, -1e-15)).value().imag() == 0.0);
    CHECK_THROWS_WITH_AS(SpectralPoint(cplx(1.0, -1e-6)), doctest::Contains("InvalidArgument"), Error);
    CHECK(SpectralPoint(cplx(2.0, 1.0)).mirror().value() == cplx(-2.0, 1.0));
    CHECK_THROWS_AS(jost_solution(PotentialModel::zero(1), 1.0, -0.5), Error);
}

}
