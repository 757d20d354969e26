#include "halfline/boundary.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace halfline {

namespace {

constexpr double kSelfadjointTol = 1e-10;
constexpr double kRankTol = 1e-10;
constexpr double kSingularTransformTol = 1e-12;

const cplx kI{0.0, 1.0};

} // namespace

BoundaryDiagnostics diagnose_pair(const cmat& a, const cmat& b) {
    BoundaryDiagnostics d;
    const double scale = row_sum_norm(a) + row_sum_norm(b);
    const double defect = row_sum_norm(a.adjoint() * b - b.adjoint() * a);
    d.selfadjointness = scale > 0.0 ? defect / (scale * scale) : defect;

    const cmat gram = a.adjoint() * a + b.adjoint() * b;
    Eigen::SelfAdjointEigenSolver<cmat> es((gram + gram.adjoint()) / 2.0);
    const double top = es.eigenvalues().maxCoeff();
    d.rank_ratio = top > 0.0 ? es.eigenvalues().minCoeff() / top : 0.0;
    return d;
}

BoundaryPair validate_pair(const cmat& a, const cmat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() == 0) {
        std::ostringstream os;
        os << "A is " << a.rows() << "x" << a.cols() << ", B is " << b.rows() << "x" << b.cols();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    if (!a.allFinite() || !b.allFinite())
        throw Error(ErrorCode::SelfadjointnessViolated, "non-finite boundary matrix entry");
    const BoundaryDiagnostics d = diagnose_pair(a, b);
    if (d.selfadjointness > kSelfadjointTol) {
        std::ostringstream os;
        os << "relative |A^dagger B - B^dagger A| = " << d.selfadjointness;
        throw Error(ErrorCode::SelfadjointnessViolated, os.str());
    }
    if (!(d.rank_ratio >= kRankTol)) {
        std::ostringstream os;
        os << "A^dagger A + B^dagger B has eigenvalue ratio " << d.rank_ratio;
        throw Error(ErrorCode::RankDeficient, os.str());
    }
    return BoundaryPair{a, b};
}

BoundaryPair theta_pair(const std::vector<double>& theta) {
    const auto n = static_cast<Eigen::Index>(theta.size());
    BoundaryPair bp{cmat::Zero(n, n), cmat::Zero(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        const double t = theta[static_cast<std::size_t>(j)];
        // Exact values on the Dirichlet and Neumann points.
        double s = std::sin(t);
        double c = std::cos(t);
        if (t == kPi) { s = 0.0; c = -1.0; }
        if (t == kPi / 2) { s = 1.0; c = 0.0; }
        bp.a(j, j) = -s;
        bp.b(j, j) = c;
    }
    return bp;
}

cmat compute_E(const BoundaryPair& bp) {
    return hermitian_sqrt(bp.a.adjoint() * bp.a + bp.b.adjoint() * bp.b);
}

cmat compute_U(const BoundaryPair& bp) {
    const cmat plus = bp.b + kI * bp.a;
    if (condition_number(plus) > 1e13)
        throw Error(ErrorCode::SingularTransform, "B + iA is numerically singular");
    return right_divide(bp.b - kI * bp.a, plus);
}

ChannelType CanonicalBoundary::channel(std::size_t j) const {
    const auto jj = static_cast<int>(j);
    if (jj < n_mixed) return ChannelType::Mixed;
    if (jj < n_mixed + n_dirichlet) return ChannelType::Dirichlet;
    return ChannelType::Neumann;
}

CanonicalBoundary canonicalize(const BoundaryPair& bp, double class_tol) {
    const Eigen::Index n = bp.dim();
    const cmat u = compute_U(bp);
    const auto eig = unitary_eig(u);

    std::vector<ChannelType> type(static_cast<std::size_t>(n));
    std::vector<double> zeta = eig.zeta;
    for (std::size_t j = 0; j < zeta.size(); ++j) {
        double& z = zeta[j];
        // The branch cut at e^{2i zeta} = 1 sits between 0 and pi; both ends
        // are Dirichlet and are reported as pi.
        if (std::abs(z - kPi) <= class_tol || z <= class_tol) {
            z = kPi;
            type[j] = ChannelType::Dirichlet;
        } else if (std::abs(z - kPi / 2) <= class_tol) {
            z = kPi / 2;
            type[j] = ChannelType::Neumann;
        } else {
            type[j] = ChannelType::Mixed;
        }
    }

    std::vector<std::size_t> order(zeta.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return static_cast<int>(type[l]) < static_cast<int>(type[r]);
    });

    CanonicalBoundary cb;
    cb.m.resize(n, n);
    cb.theta.resize(zeta.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        cb.theta[j] = zeta[order[j]];
        cb.m.col(static_cast<Eigen::Index>(j)) = eig.m.col(static_cast<Eigen::Index>(order[j]));
        switch (type[order[j]]) {
        case ChannelType::Mixed: ++cb.n_mixed; break;
        case ChannelType::Dirichlet: ++cb.n_dirichlet; break;
        case ChannelType::Neumann: ++cb.n_neumann; break;
        }
    }
    cb.t1 = (bp.b + kI * bp.a).inverse();
    const BoundaryPair canon = theta_pair(cb.theta);
    cb.t2 = canon.b + kI * canon.a;
    return cb;
}

double reconstruction_residual(const BoundaryPair& bp, const CanonicalBoundary& cb) {
    const BoundaryPair canon = cb.pair();
    const BoundaryPair mapped = transform_pair(bp, cb.m, cb.t1, cb.t2);
    return std::max(row_sum_norm(mapped.a - canon.a), row_sum_norm(mapped.b - canon.b));
}

BoundaryPair right_multiply(const BoundaryPair& bp, const cmat& t) {
    if (t.rows() != bp.dim() || t.cols() != bp.dim())
        throw Error(ErrorCode::DimensionMismatch, "transform has the wrong size");
    if (condition_number(t) > 1.0 / kSingularTransformTol)
        throw Error(ErrorCode::SingularTransform, "right factor is numerically singular");
    return BoundaryPair{bp.a * t, bp.b * t};
}

BoundaryPair conjugate(const BoundaryPair& bp, const cmat& m) {
    if (m.rows() != bp.dim() || m.cols() != bp.dim())
        throw Error(ErrorCode::DimensionMismatch, "transform has the wrong size");
    if (unitarity_defect(m) > 1e-10)
        throw Error(ErrorCode::NotUnitary, "conjugating matrix is not unitary");
    return BoundaryPair{m.adjoint() * bp.a * m, m.adjoint() * bp.b * m};
}

BoundaryPair transform_pair(const BoundaryPair& bp, const cmat& m, const cmat& t1, const cmat& t2) {
    const BoundaryPair step = right_multiply(bp, t1);
    return right_multiply(conjugate(step, m), t2);
}

} // namespace halfline
