#include "halfline/scattering.hpp"

#include <cmath>
#include <sstream>

namespace halfline {

namespace {

const cplx kI{0.0, 1.0};

cmat inverse_checked(const cmat& j) {
    return divide_by_jost(cmat::Identity(j.rows(), j.cols()), j, kJostMaxCondition);
}

} // namespace

ScatteringSample s_matrix(const PotentialModel& p, const BoundaryPair& bp, double k, double tol) {
    if (k == 0.0 || !std::isfinite(k))
        throw Error(ErrorCode::InvalidArgument, "S(k) is evaluated directly only for real k != 0");
    // J(k) needs f(-k, 0); J(-k) needs f(k, 0).
    const JostValues minus = jost_at_origin(p, SpectralPoint(-k), tol);
    const JostValues plus = jost_at_origin(p, SpectralPoint(k), tol);
    const cmat j = assemble_jost_matrix(minus, bp);
    const cmat j_minus = assemble_jost_matrix(plus, bp);
    const cmat j_inv = inverse_checked(j);

    ScatteringSample out;
    out.k = k;
    out.S = -j_minus * j_inv;
    const Eigen::Index n = bp.dim();
    out.unitarity_defect = row_sum_norm(out.S * out.S.adjoint() - cmat::Identity(n, n));
    const double scale = row_sum_norm(bp.a) + row_sum_norm(bp.b);
    out.err_est = scale * (plus.err_est + minus.err_est * row_sum_norm(out.S)) * row_sum_norm(j_inv);
    return out;
}

cmat s_at_zero(const PotentialModel& p, const BoundaryPair& bp, double tol) {
    // S is analytic at 0 for compactly supported V, so halving k removes one
    // power of k per Richardson column.
    constexpr int kMaxLevels = 10;
    constexpr double kStart = 1e-3;
    constexpr double kContract = 1e-6;
    std::vector<std::vector<cmat>> table;
    cmat previous;
    double previous_gap = std::numeric_limits<double>::infinity();
    for (int level = 0; level < kMaxLevels; ++level) {
        const double k = kStart / std::pow(2.0, level);
        std::vector<cmat> row{s_matrix(p, bp, k, tol).S};
        for (int m = 1; m <= level; ++m) {
            const double factor = std::pow(2.0, m) - 1.0;
            const cmat& finer = row[static_cast<std::size_t>(m - 1)];
            const cmat& coarser = table.back()[static_cast<std::size_t>(m - 1)];
            row.push_back(finer + (finer - coarser) / factor);
        }
        const cmat estimate = row.back();
        table.push_back(std::move(row));
        if (level > 0) {
            const double gap = row_sum_norm(estimate - previous);
            if (gap < kContract) return estimate;
            // Past the first few levels the table should contract; growing
            // differences mean roundoff has taken over.
            if (level >= 3 && gap > previous_gap) break;
            previous_gap = gap;
        }
        previous = estimate;
    }
    throw Error(ErrorCode::ExtrapolationDivergence, "S(k) extrapolation to k = 0 did not settle");
}

cvec free_canonical_s(const std::vector<double>& theta, cplx k) {
    const BoundaryPair canon = theta_pair(theta);
    cvec out(static_cast<Eigen::Index>(theta.size()));
    for (Eigen::Index j = 0; j < out.size(); ++j) {
        const double s = -canon.a(j, j).real();
        const double c = canon.b(j, j).real();
        const cplx den = c + kI * k * s;
        if (std::abs(den) == 0.0) throw Error(ErrorCode::SingularJ0, "free Jost entry vanishes");
        out(j) = (-c + kI * k * s) / den;
    }
    return out;
}

FreeReference s0_reference(const BoundaryPair& bp, cplx k) {
    FreeReference out;
    out.J0 = bp.b - kI * k * bp.a;
    // A 1x1 matrix always has condition number 1, so also compare the smallest
    // singular value with the size of the two terms.
    Eigen::JacobiSVD<cmat> svd(out.J0);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double scale = row_sum_norm(bp.b) + std::abs(k) * row_sum_norm(bp.a);
    if (!(smin > 0.0) || sv(0) / smin > kJostMaxCondition || smin <= 1e-12 * scale) {
        std::ostringstream os;
        os << "B - ikA is numerically singular (smallest singular value " << smin << ")";
        throw Error(ErrorCode::SingularJ0, os.str());
    }
    out.J0_inv = out.J0.inverse();
    const CanonicalBoundary cb = canonicalize(bp);
    out.S0 = cb.m * free_canonical_s(cb.theta, k).asDiagonal() * cb.m.adjoint();
    return out;
}

AsymptoticModel::AsymptoticModel(const PotentialModel& p, const BoundaryPair& bp)
    : canon_(canonicalize(bp)),
      moments_(std::make_shared<const MomentSet>(std::make_shared<const PotentialModel>(p))) {
    const Eigen::Index n = canon_.dim();
    z0_ = cmat::Zero(n, n);
    z1_ = cmat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        switch (canon_.channel(static_cast<std::size_t>(j))) {
        case ChannelType::Mixed:
            z0_(j, j) = 1.0;
            z1_(j, j) = 1.0 / std::tan(canon_.theta[static_cast<std::size_t>(j)]);
            break;
        case ChannelType::Dirichlet: z0_(j, j) = -1.0; break;
        case ChannelType::Neumann: z0_(j, j) = 1.0; break;
        }
    }
    s_inf_ = canon_.m * z0_ * canon_.m.adjoint();
}

cmat AsymptoticModel::G(double k) const {
    const cmat& q1 = moments_->q1();
    return -2.0 * canon_.m * z1_ * canon_.m.adjoint() + q1 * s_inf_ + s_inf_ * q1 +
           s_inf_ * moments_->q2(k) * s_inf_ + moments_->q2(-k);
}

cmat AsymptoticModel::s_model(double k) const { return s_inf_ + G(k) / (kI * k); }

AsymptoticModel asymptotic_model(const PotentialModel& p, const BoundaryPair& bp) {
    return AsymptoticModel(p, bp);
}

OriginModel model_f_origin(const MomentSet& q, cplx k) {
    const Eigen::Index n = q.q1().rows();
    const cmat id = cmat::Identity(n, n);
    const cmat q2 = q.q2(k), q4 = q.q4(k), q5 = q.q5(k), q6 = q.q6(k);
    const cmat& q1 = q.q1();
    const cmat& q3 = q.q3();
    OriginModel out;
    out.f_dag = id + (-q1 + q2) / (kI * k) + (-q3 - q4 + q5 + q6) / (k * k);
    out.fp_dag = kI * k * id - q1 - q2 + (q3 - q4 + q5 - q6) / (kI * k);
    return out;
}

cmat model_J(const MomentSet& q, const BoundaryPair& bp, cplx k) {
    const cmat& q1 = q.q1();
    const cmat q2 = q.q2(k);
    const cmat pk = (-q1 + q2) * bp.b + (-q.q3() + q.q4(k) - q.q5(k) + q.q6(k)) * bp.a;
    return -kI * k * bp.a + bp.b + (q1 + q2) * bp.a + pk / (kI * k);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "slope fit needs at least two matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace halfline
