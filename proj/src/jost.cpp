#include "halfline/jost.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace halfline {

namespace {

const cplx kI{0.0, 1.0};

// Potential on the closed sub-interval [u, w] of one smooth piece.  Returns
// nullptr past the support.
const Segment* piece_for(const PotentialModel& p, double u, double w) {
    const double mid = 0.5 * (u + w);
    for (const Segment& s : p.segments())
        if (mid >= s.a && mid < s.b) return &s;
    return nullptr;
}

cmat stacked(const cmat& top, const cmat& bottom) {
    cmat y(top.rows() + bottom.rows(), top.cols());
    y.topRows(top.rows()) = top;
    y.bottomRows(bottom.rows()) = bottom;
    return y;
}

// [m; m'] at x, integrating m'' = -2ik m' + V m backward from the support end.
cmat integrate_m(const PotentialModel& p, cplx k, double x, const ode::Options& opt, ode::Stats& st) {
    const Eigen::Index n = p.dim();
    cmat y = stacked(cmat::Identity(n, n), cmat::Zero(n, n));
    const auto& segs = p.segments();
    const cplx twoik = 2.0 * kI * k;
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
        const Segment& s = *it;
        if (s.b <= x) break;
        const double to = std::max(s.a, x);
        const bool flat = s.constant();
        auto rhs = [&](double xx, const cmat& z) {
            cmat d(2 * n, n);
            d.topRows(n) = z.bottomRows(n);
            if (flat)
                d.bottomRows(n) = -twoik * z.bottomRows(n) + s.left * z.topRows(n);
            else
                d.bottomRows(n) = -twoik * z.bottomRows(n) + s.at(xx) * z.topRows(n);
            return d;
        };
        y = ode::integrate<cmat>(rhs, s.b, to, std::move(y), opt, st);
    }
    return y;
}

} // namespace

SpectralPoint::SpectralPoint(cplx k) : k_(k) {
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
        throw Error(ErrorCode::InvalidArgument, "spectral point is not finite");
    if (k.imag() < -1e-14) {
        std::ostringstream os;
        os << "k = (" << k.real() << ", " << k.imag() << ") lies below the real axis";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    if (k.imag() < 0.0) k_ = cplx(k.real(), 0.0);
}

ode::Options integrator_options(double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "integrator tolerance must be positive");
    ode::Options o;
    o.rtol = tol;
    o.atol = 1e-2 * tol;
    return o;
}

JostValues jost_solution(const PotentialModel& p, SpectralPoint kp, double x, double tol) {
    if (x < 0.0) throw Error(ErrorCode::NegativeCoordinate, "Jost solution requested at negative x");
    const cplx k = kp;
    const Eigen::Index n = p.dim();
    const cplx phase = std::exp(kI * k * x);
    JostValues out;
    if (x >= p.support_end()) {
        out.f = phase * cmat::Identity(n, n);
        out.fp = (kI * k * phase) * cmat::Identity(n, n);
        // Exact up to rounding of the exponential.
        out.err_est = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(phase) * (1.0 + std::abs(k));
        return out;
    }
    ode::Stats st;
    const cmat y = integrate_m(p, k, x, integrator_options(tol), st);
    const cmat m = y.topRows(n);
    const cmat mp = y.bottomRows(n);
    out.f = phase * m;
    out.fp = phase * (kI * k * m + mp);
    out.err_est = std::abs(phase) * (1.0 + std::abs(k)) * ode::error_estimate(st);
    return out;
}

JostValues jost_at_origin(const PotentialModel& p, SpectralPoint k, double tol) {
    return jost_solution(p, k, 0.0, tol);
}

cmat assemble_jost_matrix(const JostValues& mirror, const BoundaryPair& bp) {
    if (mirror.f.rows() != bp.dim())
        throw Error(ErrorCode::DimensionMismatch, "potential and boundary pair differ in size");
    return mirror.f.adjoint() * bp.b - mirror.fp.adjoint() * bp.a;
}

JostEvaluation jost_matrix(const PotentialModel& p, const BoundaryPair& bp, SpectralPoint k, double tol) {
    const JostValues mirror = jost_at_origin(p, k.mirror(), tol);
    JostEvaluation out;
    out.k = k;
    out.f0 = mirror.f;
    out.fp0 = mirror.fp;
    out.J = assemble_jost_matrix(mirror, bp);
    out.err_est = mirror.err_est * (row_sum_norm(bp.a) + row_sum_norm(bp.b));
    return out;
}

RegularSolutionTrace regular_solution(const PotentialModel& p, const BoundaryPair& bp, cplx k,
                                      const std::vector<double>& xs, double tol) {
    if (xs.empty() || xs.front() != 0.0)
        throw Error(ErrorCode::BadGrid, "regular solution grid must start at 0");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw Error(ErrorCode::BadGrid, "regular solution grid must increase");
    if (bp.dim() != p.dim())
        throw Error(ErrorCode::DimensionMismatch, "potential and boundary pair differ in size");

    const Eigen::Index n = p.dim();
    const cplx k2 = k * k;
    const ode::Options opt = integrator_options(tol);
    ode::Stats st;

    RegularSolutionTrace out;
    out.k = k;
    out.xs = xs;
    out.phi.push_back(bp.a);
    out.phip.push_back(bp.b);

    cmat y = stacked(bp.a, bp.b);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        // Stop at every breakpoint so each piece sees a smooth right-hand side.
        std::vector<double> stops;
        for (double b : p.breakpoints())
            if (b > xs[i - 1] && b < xs[i]) stops.push_back(b);
        stops.push_back(xs[i]);
        double from = xs[i - 1];
        for (double to : stops) {
            const Segment* s = piece_for(p, from, to);
            auto rhs = [&](double xx, const cmat& z) {
                cmat d(2 * n, n);
                d.topRows(n) = z.bottomRows(n);
                if (s == nullptr)
                    d.bottomRows(n) = -k2 * z.topRows(n);
                else if (s->constant())
                    d.bottomRows(n) = s->left * z.topRows(n) - k2 * z.topRows(n);
                else
                    d.bottomRows(n) = s->at(xx) * z.topRows(n) - k2 * z.topRows(n);
                return d;
            };
            y = ode::integrate<cmat>(rhs, from, to, std::move(y), opt, st);
            from = to;
        }
        out.phi.push_back(y.topRows(n));
        out.phip.push_back(y.bottomRows(n));
    }
    out.err_est = (1.0 + std::abs(k)) * ode::error_estimate(st);
    return out;
}

cmat divide_by_jost(const cmat& x, const cmat& j, double max_cond) {
    const double c = condition_number(j);
    if (!(c <= max_cond)) {
        std::ostringstream os;
        os << "Jost matrix condition number " << c;
        throw Error(ErrorCode::SingularJost, os.str());
    }
    return right_divide(x, j);
}

cmat physical_solution(const PotentialModel& p, const BoundaryPair& bp, double k, double x, PhysicalPath path,
                       double tol) {
    if (k == 0.0) throw Error(ErrorCode::InvalidArgument, "physical solution needs k != 0");
    const JostValues at_minus = jost_at_origin(p, SpectralPoint(-k), tol);
    const cmat j = assemble_jost_matrix(at_minus, bp);
    if (path == PhysicalPath::Regular) {
        const std::vector<double> grid = x > 0.0 ? std::vector<double>{0.0, x} : std::vector<double>{0.0};
        const RegularSolutionTrace phi = regular_solution(p, bp, cplx(k, 0.0), grid, tol);
        return divide_by_jost(-2.0 * kI * k * phi.phi.back(), j);
    }
    const JostValues at_plus = jost_at_origin(p, SpectralPoint(k), tol);
    const cmat j_minus = assemble_jost_matrix(at_plus, bp);
    const cmat s = -divide_by_jost(j_minus, j);
    const cmat f_plus = jost_solution(p, SpectralPoint(k), x, tol).f;
    const cmat f_minus = jost_solution(p, SpectralPoint(-k), x, tol).f;
    return f_minus + f_plus * s;
}

} // namespace halfline
