#pragma once

// Independent oracles, random generators and the shared regression problems.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "halfline/boundary.hpp"
#include "halfline/potential.hpp"

namespace halfline::testing {

inline const cplx kI{0.0, 1.0};

// ---------------------------------------------------------------- generators

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

    cmat matrix(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
        cmat m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(normal(), normal()) * scale;
        return m;
    }

    cmat hermitian(Eigen::Index n, double scale = 1.0) {
        const cmat x = matrix(n, n, scale);
        return (x + x.adjoint()) / 2.0;
    }

    cmat unitary(Eigen::Index n) {
        Eigen::HouseholderQR<cmat> qr(matrix(n, n));
        cmat q = qr.householderQ();
        return q;
    }

    // Well-conditioned invertible matrix.
    cmat invertible(Eigen::Index n) { return cmat::Identity(n, n) + matrix(n, n, 0.25); }

    // theta drawn from (0, pi]; with some probability snapped onto pi or pi/2.
    std::vector<double> theta(Eigen::Index n, bool allow_special = true) {
        std::vector<double> t;
        for (Eigen::Index j = 0; j < n; ++j) {
            const int pick = allow_special ? integer(0, 4) : 0;
            if (pick == 3)
                t.push_back(kPi);
            else if (pick == 4)
                t.push_back(kPi / 2);
            else
                t.push_back(uniform(0.15, kPi - 0.15));
        }
        return t;
    }

    // A non-diagonal valid pair: conjugated theta-form, then right-multiplied.
    BoundaryPair pair(Eigen::Index n, bool allow_special = true) {
        const BoundaryPair canon = theta_pair(theta(n, allow_special));
        const cmat m = unitary(n);
        const cmat t = invertible(n);
        return validate_pair(m * canon.a * m.adjoint() * t, m * canon.b * m.adjoint() * t);
    }

private:
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    std::mt19937 rng_;
};

// ---------------------------------------------------------------- oracles

// Propagator of [y; y'] across a constant piece: y'' = (V - k^2) y.
inline cmat piece_propagator(const cmat& v, cplx k, double dx) {
    const Eigen::Index n = v.rows();
    cmat g = cmat::Zero(2 * n, 2 * n);
    g.topRightCorner(n, n) = cmat::Identity(n, n);
    g.bottomLeftCorner(n, n) = v - k * k * cmat::Identity(n, n);
    return cmat(g * dx).exp();
}

// [f(k, x); f'(k, x)] for a piecewise-constant potential, by matrix
// exponentials from the support end.
inline cmat transfer_jost(const PotentialModel& p, cplx k, double x) {
    const Eigen::Index n = p.dim();
    const double end = p.support_end();
    cmat y(2 * n, n);
    const double xe = std::max(x, end);
    y.topRows(n) = std::exp(kI * k * xe) * cmat::Identity(n, n);
    y.bottomRows(n) = kI * k * std::exp(kI * k * xe) * cmat::Identity(n, n);
    const auto& segs = p.segments();
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
        if (it->b <= x) break;
        const double from = it->b, to = std::max(it->a, x);
        y = piece_propagator(it->left, k, to - from) * y;
    }
    if (x > end) {
        // Free propagation is exact anyway.
        y.topRows(n) = std::exp(kI * k * x) * cmat::Identity(n, n);
        y.bottomRows(n) = kI * k * std::exp(kI * k * x) * cmat::Identity(n, n);
    }
    return y;
}

// [phi(k, x); phi'(k, x)] with phi(0) = A, phi'(0) = B.
inline cmat transfer_regular(const PotentialModel& p, const BoundaryPair& bp, cplx k, double x) {
    const Eigen::Index n = p.dim();
    cmat y(2 * n, n);
    y.topRows(n) = bp.a;
    y.bottomRows(n) = bp.b;
    double at = 0.0;
    for (const Segment& s : p.segments()) {
        if (s.a >= x) break;
        const double to = std::min(s.b, x);
        y = piece_propagator(s.left, k, to - at) * y;
        at = to;
    }
    if (x > at) y = piece_propagator(cmat::Zero(n, n), k, x - at) * y;
    return y;
}

// Dirichlet bound states of the scalar well -depth on [0, width]: roots in
// (0, sqrt(depth)) of q cos(q w) + kappa sin(q w), q = sqrt(depth - kappa^2),
// which is q cot(q w) = -kappa cleared of poles.
inline std::vector<double> well_dirichlet_roots(double depth, double width) {
    auto g = [&](double kappa) {
        const double q = std::sqrt(depth - kappa * kappa);
        return q * std::cos(q * width) + kappa * std::sin(q * width);
    };
    std::vector<double> roots;
    const double top = std::sqrt(depth);
    const int m = 20000;
    double a = 1e-9, ga = g(a);
    for (int i = 1; i <= m; ++i) {
        const double b = top * i / m - (i == m ? 1e-12 : 0.0);
        const double gb = g(b);
        if (ga == 0.0) roots.push_back(a);
        if (ga * gb < 0.0) {
            double lo = a, hi = b, glo = ga;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if ((gm < 0.0) == (glo < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        a = b;
        ga = gb;
    }
    return roots;
}

// ---------------------------------------------------------------- problems

struct Problem {
    std::string name;
    PotentialModel potential;
    BoundaryPair boundary;
    int bound_states = -1;  // expected count when known independently, else -1
    int mu = -1;
};

inline PotentialModel scalar_well(double depth, double width) {
    return PotentialModel::piecewise_constant({0.0, width}, {cmat::Constant(1, 1, -depth)});
}

inline BoundaryPair block_pair(const BoundaryPair& x, const BoundaryPair& y) {
    return BoundaryPair{direct_sum(x.a, y.a), direct_sum(x.b, y.b)};
}

inline PotentialModel dense_potential() {
    cmat v1(2, 2), v2(2, 2);
    v1 << -3.0, cplx(1.0, -0.5), cplx(1.0, 0.5), -2.0;
    v2 << -1.0, cplx(0.0, 0.75), cplx(0.0, -0.75), 0.5;
    return PotentialModel::piecewise_constant({0.0, 0.7, 1.5}, {v1, v2});
}

inline BoundaryPair dense_pair() {
    // A fixed non-diagonal pair with one mixed and one Dirichlet channel.
    cmat m(2, 2);
    m << 1.0 / std::sqrt(2.0), kI / std::sqrt(2.0), kI / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    cmat t(2, 2);
    t << 1.3, 0.2, cplx(-0.4, 0.1), 0.9;
    const BoundaryPair th = theta_pair({kPi / 5, kPi});
    return validate_pair(m * th.a * m.adjoint() * t, m * th.b * m.adjoint() * t);
}

inline PotentialModel ramp_potential() {
    // Sampled 2x2 potential, linear interpolation between nodes.
    std::vector<double> xs{0.0, 0.5, 1.0, 2.0};
    std::vector<cmat> vs;
    for (double x : xs) {
        cmat v(2, 2);
        v << -2.0 + x, cplx(0.3, 0.2) * (2.0 - x), cplx(0.3, -0.2) * (2.0 - x), -1.5 + 0.75 * x;
        vs.push_back(v);
    }
    return PotentialModel::sampled_grid(xs, vs);
}

inline std::vector<Problem> regression_problems() {
    std::vector<Problem> out;
    const PotentialModel zero1 = PotentialModel::zero(1);
    for (int j : {6, 4, 3})
        out.push_back({"robin_free_pi/" + std::to_string(j), zero1, theta_pair({kPi / j}), 1, 0});
    out.push_back({"robin_free_2pi/3", zero1, theta_pair({2 * kPi / 3}), 0, 0});
    out.push_back({"robin_free_3pi/4", zero1, theta_pair({3 * kPi / 4}), 0, 0});
    out.push_back({"neumann_free", zero1, theta_pair({kPi / 2}), 0, 1});
    out.push_back({"dirichlet_well", scalar_well(4.0, kPi), theta_pair({kPi}), 2, 0});
    out.push_back({"resonance_well", scalar_well(2.25, kPi), theta_pair({kPi}), 1, 1});
    out.push_back({"block_well_robin", direct_sum(scalar_well(4.0, kPi), zero1),
                   block_pair(theta_pair({kPi}), theta_pair({kPi / 4})), 3, 0});
    out.push_back({"block_neumann_dirichlet_free", PotentialModel::zero(2), theta_pair({kPi / 2, kPi}), 0, 1});
    out.push_back({"block_shallow_mixed", direct_sum(scalar_well(1.0, 2.0), scalar_well(0.5, 1.0)),
                   theta_pair({kPi / 3, 3 * kPi / 4}), -1, -1});
    out.push_back({"dense_2x2", dense_potential(), dense_pair(), -1, -1});
    out.push_back({"ramp_2x2", ramp_potential(), theta_pair({kPi / 2, 3 * kPi / 5}), -1, -1});
    return out;
}

inline bool purely_dirichlet(const BoundaryPair& bp) {
    const CanonicalBoundary cb = canonicalize(bp);
    return cb.n_mixed == 0 && cb.n_neumann == 0;
}

} // namespace halfline::testing
