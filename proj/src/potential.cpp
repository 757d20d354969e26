#include "halfline/potential.hpp"

#include <algorithm>
#include <sstream>

#include "halfline/quadrature.hpp"

namespace halfline {

namespace {

constexpr double kHermitianTol = 1e-12;

const cplx kI{0.0, 1.0};

void check_grid(const std::vector<double>& xs, std::size_t min_points) {
    if (xs.size() < min_points)
        throw Error(ErrorCode::BadGrid, "too few breakpoints");
    if (xs.front() != 0.0)
        throw Error(ErrorCode::BadGrid, "first breakpoint must be 0");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !(xs[i] > xs[i - 1])) {
            std::ostringstream os;
            os << "breakpoints not strictly increasing at index " << i;
            throw Error(ErrorCode::BadGrid, os.str());
        }
    }
}

Eigen::Index check_values(const std::vector<cmat>& values) {
    const Eigen::Index n = values.front().rows();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const cmat& v = values[i];
        if (v.rows() != n || v.cols() != n) {
            std::ostringstream os;
            os << "value " << i << " has shape " << v.rows() << "x" << v.cols();
            throw Error(ErrorCode::DimensionMismatch, os.str());
        }
        if (!v.allFinite()) {
            std::ostringstream os;
            os << "value " << i << " has a non-finite entry";
            throw Error(ErrorCode::NotSelfadjoint, os.str());
        }
    }
    const PotentialDiagnostics d = diagnose_potential_values(values);
    if (d.worst_index >= 0) {
        const cmat& v = values[static_cast<std::size_t>(d.worst_index)];
        if (d.hermiticity > kHermitianTol * std::max(1.0, row_sum_norm(v))) {
            std::ostringstream os;
            os << "value at index " << d.worst_index << " differs from its adjoint by " << d.hermiticity;
            throw Error(ErrorCode::NotSelfadjoint, os.str());
        }
    }
    return n;
}

// Integrals over [0, h] of e^{cu}, u e^{cu} and (h - u) e^{cu}.
struct ExpIntegrals {
    cplx g0, g1, f1;
};

ExpIntegrals exp_integrals(cplx c, double h) {
    const cplx ch = c * h;
    ExpIntegrals out;
    if (std::abs(ch) < 0.5) {
        // Power series; |ch|^m / m! falls below 1e-18 well before 30 terms.
        cplx term = 1.0; // (ch)^m / m!
        cplx g0 = 0.0, g1 = 0.0;
        for (int m = 0; m < 30; ++m) {
            g0 += term * h / double(m + 1);
            g1 += term * h * h / double(m + 2);
            term *= ch / double(m + 1);
        }
        out.g0 = g0;
        out.g1 = g1;
    } else {
        const cplx e = std::exp(ch);
        out.g0 = (e - 1.0) / c;
        out.g1 = (h * e - out.g0) / c;
    }
    out.f1 = h * out.g0 - out.g1;
    return out;
}

} // namespace

cmat Segment::at(double x) const {
    if (left == right) return left;
    const double t = (x - a) / (b - a);
    return (1.0 - t) * left + t * right;
}

PotentialDiagnostics diagnose_potential_values(const std::vector<cmat>& values) {
    PotentialDiagnostics d;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const cmat& v = values[i];
        if (v.rows() != v.cols()) continue;
        const double defect = hermiticity_defect(v);
        if (d.worst_index < 0 || defect > d.hermiticity) {
            d.hermiticity = defect;
            d.worst_index = static_cast<int>(i);
        }
    }
    return d;
}

PotentialModel PotentialModel::zero(Eigen::Index n) {
    if (n < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
    PotentialModel p;
    p.kind_ = PotentialKind::Zero;
    p.n_ = n;
    return p;
}

PotentialModel PotentialModel::piecewise_constant(std::vector<double> breakpoints, std::vector<cmat> values) {
    check_grid(breakpoints, 2);
    if (values.size() + 1 != breakpoints.size())
        throw Error(ErrorCode::BadGrid, "need one value per interval");
    PotentialModel p;
    p.kind_ = PotentialKind::PiecewiseConstant;
    p.n_ = check_values(values);
    p.breakpoints_ = std::move(breakpoints);
    p.values_ = std::move(values);
    p.finish();
    return p;
}

PotentialModel PotentialModel::sampled_grid(std::vector<double> xs, std::vector<cmat> values) {
    check_grid(xs, 2);
    if (values.size() != xs.size())
        throw Error(ErrorCode::BadGrid, "need one value per node");
    PotentialModel p;
    p.kind_ = PotentialKind::SampledGrid;
    p.n_ = check_values(values);
    p.breakpoints_ = std::move(xs);
    p.values_ = std::move(values);
    p.finish();
    return p;
}

void PotentialModel::finish() {
    for (cmat& v : values_) v = (v + v.adjoint()) / 2.0;
    segments_.clear();
    for (std::size_t j = 0; j + 1 < breakpoints_.size(); ++j) {
        Segment s;
        s.a = breakpoints_[j];
        s.b = breakpoints_[j + 1];
        if (kind_ == PotentialKind::PiecewiseConstant) {
            s.left = values_[j];
            s.right = values_[j];
        } else {
            s.left = values_[j];
            s.right = values_[j + 1];
        }
        segments_.push_back(std::move(s));
    }

    l1_ = 0.0;
    first_moment_ = 0.0;
    for (const Segment& s : segments_) {
        if (s.constant()) {
            const double norm = row_sum_norm(s.left);
            l1_ += norm * (s.b - s.a);
            first_moment_ += norm * 0.5 * (s.b * s.b - s.a * s.a);
        } else {
            l1_ += quad::integrate<double>([&](double x) { return row_sum_norm(s.at(x)); }, s.a, s.b,
                                           1e-12, 1e-15).value;
            first_moment_ += quad::integrate<double>([&](double x) { return x * row_sum_norm(s.at(x)); },
                                                     s.a, s.b, 1e-12, 1e-15).value;
        }
    }
}

double PotentialModel::sup_norm() const {
    double out = 0.0;
    for (const cmat& v : values_) out = std::max(out, row_sum_norm(v));
    return out;
}

cmat PotentialModel::eval(double x) const {
    if (x < 0.0 || std::isnan(x))
        throw Error(ErrorCode::NegativeCoordinate, "potential evaluated at negative x");
    if (segments_.empty() || x > support_end()) return cmat::Zero(n_, n_);
    // Grids include their last node; piecewise-constant intervals are left-closed.
    if (x == support_end()) return kind_ == PotentialKind::SampledGrid ? values_.back() : cmat::Zero(n_, n_);
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto j = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it) - 1);
    return segments_[j].at(x);
}

PotentialModel PotentialModel::conjugated(const cmat& m) const {
    PotentialModel p = *this;
    for (cmat& v : p.values_) v = m.adjoint() * v * m;
    p.finish();
    return p;
}

PotentialModel direct_sum(const PotentialModel& p, const PotentialModel& q) {
    const Eigen::Index n = p.dim() + q.dim();
    if (p.kind() == PotentialKind::Zero && q.kind() == PotentialKind::Zero) return PotentialModel::zero(n);

    std::vector<double> xs = p.breakpoints();
    xs.insert(xs.end(), q.breakpoints().begin(), q.breakpoints().end());
    if (xs.empty()) xs.push_back(0.0);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.front() != 0.0) xs.insert(xs.begin(), 0.0);

    const bool grid = p.kind() == PotentialKind::SampledGrid || q.kind() == PotentialKind::SampledGrid;
    if (!grid) {
        std::vector<cmat> values;
        for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
            const double mid = 0.5 * (xs[j] + xs[j + 1]);
            values.push_back(direct_sum(p.eval(mid), q.eval(mid)));
        }
        return PotentialModel::piecewise_constant(std::move(xs), std::move(values));
    }
    // Merging a grid with a piecewise-constant model is not exact at the
    // jumps, so only grid-with-grid (or grid-with-zero) sums are supported.
    if ((p.kind() == PotentialKind::PiecewiseConstant) || (q.kind() == PotentialKind::PiecewiseConstant))
        throw Error(ErrorCode::BadGrid, "cannot merge sampled grid with piecewise-constant model");
    for (const PotentialModel* part : {&p, &q})
        if (part->support_end() < xs.back() && part->kind() == PotentialKind::SampledGrid &&
            part->values().back().cwiseAbs().maxCoeff() != 0.0)
            throw Error(ErrorCode::BadGrid, "a grid that ends on a nonzero value cannot be padded with zeros");
    std::vector<cmat> values;
    for (double x : xs) values.push_back(direct_sum(p.eval(x), q.eval(x)));
    return PotentialModel::sampled_grid(std::move(xs), std::move(values));
}

// ---------------------------------------------------------------------------
// Moments

MomentSet moments(const PotentialModel& p) {
    return MomentSet(std::make_shared<const PotentialModel>(p));
}

bool MomentSet::exact() const {
    return method_ == Method::Auto && p_->kind() != PotentialKind::SampledGrid;
}

MomentSet::MomentSet(std::shared_ptr<const PotentialModel> p, Method method, double rel_tol)
    : p_(std::move(p)), method_(method), tol_(rel_tol) {
    // Oscillatory moments can cancel to zero, so the relative target needs an
    // absolute floor tied to the size of V.
    const double scale = std::max(p_->l1_norm(), p_->l1_norm() * p_->l1_norm());
    atol_ = std::max(1e-300, 1e-3 * tol_ * scale);
    const Eigen::Index n = p_->dim();
    q1_ = cmat::Zero(n, n);
    q3_ = cmat::Zero(n, n);
    const auto& segs = p_->segments();
    if (segs.empty()) return;

    if (exact()) {
        cmat w = cmat::Zero(n, n); // int_0^{a_j} V
        for (const Segment& s : segs) {
            const double h = s.b - s.a;
            q1_ += 0.5 * h * s.left;
            q3_ += 0.25 * s.left * (w * h + s.left * (0.5 * h * h));
            w += h * s.left;
        }
        return;
    }

    cmat w = cmat::Zero(n, n);
    for (const Segment& s : segs) {
        const cmat seg_int =
            quad::integrate<cmat>([&](double x) { return s.at(x); }, s.a, s.b, tol_, atol_).value;
        q1_ += 0.5 * seg_int;
        auto outer = [&](double z) -> cmat {
            const cmat partial =
                z > s.a ? quad::integrate<cmat>([&](double y) { return s.at(y); }, s.a, z, tol_, atol_).value
                        : cmat::Zero(n, n);
            return s.at(z) * (w + partial);
        };
        q3_ += 0.25 * quad::integrate<cmat>(outer, s.a, s.b, tol_, atol_).value;
        w += seg_int;
    }
}

cmat MomentSet::q2(cplx k) const {
    const Eigen::Index n = p_->dim();
    cmat out = cmat::Zero(n, n);
    const cplx c = 2.0 * kI * k;
    for (const Segment& s : p_->segments()) {
        if (exact()) {
            out += 0.5 * std::exp(c * s.a) * exp_integrals(c, s.b - s.a).g0 * s.left;
        } else {
            out += 0.5 * quad::integrate<cmat>([&](double y) -> cmat { return std::exp(c * y) * s.at(y); },
                                               s.a, s.b, tol_, atol_)
                             .value;
        }
    }
    return out;
}

cmat MomentSet::q4(cplx k) const {
    const Eigen::Index n = p_->dim();
    cmat out = cmat::Zero(n, n);
    const cplx c = 2.0 * kI * k;
    cmat w = cmat::Zero(n, n);
    for (const Segment& s : p_->segments()) {
        const double h = s.b - s.a;
        if (exact()) {
            const ExpIntegrals e = exp_integrals(c, h);
            out += 0.25 * std::exp(c * s.a) * (s.left * (w * e.g0 + s.left * e.g1));
            w += h * s.left;
            continue;
        }
        auto outer = [&](double z) -> cmat {
            const cmat partial =
                z > s.a ? quad::integrate<cmat>([&](double y) { return s.at(y); }, s.a, z, tol_, atol_).value
                        : cmat::Zero(n, n);
            return std::exp(c * z) * (s.at(z) * (w + partial));
        };
        out += 0.25 * quad::integrate<cmat>(outer, s.a, s.b, tol_, atol_).value;
        w += quad::integrate<cmat>([&](double y) { return s.at(y); }, s.a, s.b, tol_, atol_).value;
    }
    return out;
}

cmat MomentSet::q5(cplx k) const {
    const Eigen::Index n = p_->dim();
    cmat out = cmat::Zero(n, n);
    const cplx c = 2.0 * kI * k;
    cmat wk = cmat::Zero(n, n); // int_0^{a_j} e^{cy} V(y) dy
    for (const Segment& s : p_->segments()) {
        const double h = s.b - s.a;
        if (exact()) {
            const ExpIntegrals e = exp_integrals(c, h);
            const cplx shift = std::exp(c * s.a);
            out += 0.25 * (s.left * (wk * h + s.left * (shift * e.f1)));
            wk += shift * e.g0 * s.left;
            continue;
        }
        auto weighted = [&](double y) -> cmat { return std::exp(c * y) * s.at(y); };
        auto outer = [&](double z) -> cmat {
            const cmat partial =
                z > s.a ? quad::integrate<cmat>(weighted, s.a, z, tol_, atol_).value : cmat::Zero(n, n);
            return s.at(z) * (wk + partial);
        };
        out += 0.25 * quad::integrate<cmat>(outer, s.a, s.b, tol_, atol_).value;
        wk += quad::integrate<cmat>(weighted, s.a, s.b, tol_, atol_).value;
    }
    return out;
}

cmat MomentSet::q6(cplx k) const {
    const Eigen::Index n = p_->dim();
    cmat out = cmat::Zero(n, n);
    const cplx c = 2.0 * kI * k;
    // r = sum_{i<j} e^{c(a_j - b_i)} int_{a_i}^{b_i} e^{c(b_i - y)} V(y) dy
    cmat r = cmat::Zero(n, n);
    for (const Segment& s : p_->segments()) {
        const double h = s.b - s.a;
        if (exact()) {
            const ExpIntegrals e = exp_integrals(c, h);
            out += 0.25 * (s.left * (r * e.g0 + s.left * e.f1));
            r = std::exp(c * h) * r + e.g0 * s.left;
            continue;
        }
        auto outer = [&](double z) -> cmat {
            const cmat partial =
                z > s.a ? quad::integrate<cmat>([&](double y) -> cmat { return std::exp(c * (z - y)) * s.at(y); },
                                                s.a, z, tol_, atol_)
                              .value
                        : cmat::Zero(n, n);
            return s.at(z) * (std::exp(c * (z - s.a)) * r + partial);
        };
        out += 0.25 * quad::integrate<cmat>(outer, s.a, s.b, tol_, atol_).value;
        const cmat tail =
            quad::integrate<cmat>([&](double y) -> cmat { return std::exp(c * (s.b - y)) * s.at(y); }, s.a, s.b,
                                  tol_, atol_)
                .value;
        r = std::exp(c * h) * r + tail;
    }
    return out;
}

} // namespace halfline
