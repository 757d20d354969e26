#include "halfline/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "halfline/scattering.hpp"

namespace halfline {

namespace {

const cplx kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * kPi;

cplx det_at(const PotentialModel& p, const BoundaryPair& bp, cplx k, double tol) {
    return jost_matrix(p, bp, SpectralPoint(k), tol).J.determinant();
}

// The d right singular vectors with the smallest singular values.
KernelBasis<double> smallest_subspace(const cmat& m, int d) {
    Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeFullV);
    KernelBasis<double> out;
    out.dim = d;
    out.basis = svd.matrixV().rightCols(d);
    return out;
}

double nearest_branch(double raw, double target) {
    return raw + kTwoPi * std::round((target - raw) / kTwoPi);
}

// int_0^inf |f(i kappa, x) beta|^2 dx by backward integration of m beta
// with an accumulator, plus the exact tail past the support.
double decaying_norm_integral(const PotentialModel& p, double kappa, const cvec& beta, double tol) {
    const Eigen::Index n = p.dim();
    const double end = p.support_end();
    double total = std::exp(-2.0 * kappa * end) * beta.squaredNorm() / (2.0 * kappa);
    if (p.segments().empty()) return total;

    cmat y = cmat::Zero(2 * n + 1, 1);
    y.topRows(n) = beta;
    const ode::Options opt = integrator_options(tol);
    ode::Stats st;
    for (auto it = p.segments().rbegin(); it != p.segments().rend(); ++it) {
        const Segment& s = *it;
        auto rhs = [&](double x, const cmat& z) {
            cmat d(2 * n + 1, 1);
            const auto w = z.topRows(n);
            const auto wp = z.middleRows(n, n);
            d.topRows(n) = wp;
            d.middleRows(n, n) = 2.0 * kappa * wp + (s.constant() ? s.left : s.at(x)) * w;
            d(2 * n, 0) = std::exp(-2.0 * kappa * x) * w.squaredNorm();
            return d;
        };
        y = ode::integrate<cmat>(rhs, s.b, s.a, std::move(y), opt, st);
    }
    total += -y(2 * n, 0).real();
    return total;
}

} // namespace

cplx detJ_imag_axis(const PotentialModel& p, const BoundaryPair& bp, double kappa, double tol) {
    if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
    return det_at(p, bp, cplx(0.0, kappa), tol);
}

double default_kappa_max(const PotentialModel& p, const BoundaryPair& bp) {
    const CanonicalBoundary cb = canonicalize(bp);
    double cot_max = 0.0;
    for (int j = 0; j < cb.n_mixed; ++j)
        cot_max = std::max(cot_max, std::abs(1.0 / std::tan(cb.theta[static_cast<std::size_t>(j)])));
    return 1.0 + p.l1_norm() + cot_max;
}

int winding_number(const PotentialModel& p, const BoundaryPair& bp, double center_kappa, double radius,
                   int samples, double tol) {
    if (!(radius > 0.0) || !(radius < center_kappa))
        throw Error(ErrorCode::InvalidArgument, "winding circle must lie in the upper half plane");
    if (samples < 4) samples = 4;
    constexpr int kMaxDoublings = 12;
    const cplx center(0.0, center_kappa);
    for (int round = 0; round <= kMaxDoublings; ++round, samples *= 2) {
        std::vector<cplx> d(static_cast<std::size_t>(samples));
        for (int j = 0; j < samples; ++j) {
            const double t = kTwoPi * j / samples;
            d[static_cast<std::size_t>(j)] = det_at(p, bp, center + radius * std::polar(1.0, t), tol);
        }
        double total = 0.0;
        bool fine = true;
        for (int j = 0; j < samples; ++j) {
            const cplx a = d[static_cast<std::size_t>(j)];
            const cplx b = d[static_cast<std::size_t>((j + 1) % samples)];
            const double step = std::arg(b / a);
            if (!(std::abs(step) < kPi / 2)) {
                fine = false;
                break;
            }
            total += step;
        }
        if (fine) return static_cast<int>(std::lround(total / kTwoPi));
    }
    throw Error(ErrorCode::PhaseStepTooLarge, "det J phase steps stay above pi/2 on the winding circle");
}

std::vector<BoundState> find_bound_states(const PotentialModel& p, const BoundaryPair& bp,
                                          const SearchOptions& opt) {
    const double kmin = opt.kappa_min;
    const double kmax = opt.kappa_max > 0.0 ? opt.kappa_max : default_kappa_max(p, bp);
    if (!(kmin > 0.0) || !(kmax > kmin) || opt.grid_points < 3)
        throw Error(ErrorCode::InvalidArgument, "bad bound-state search bracket");
    const double tol = opt.integrator_tol;

    const int m = opt.grid_points;
    std::vector<double> kap(static_cast<std::size_t>(m));
    std::vector<double> mag(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double t = static_cast<double>(i) / (m - 1);
        const double kappa = kmin * std::pow(kmax / kmin, t);
        kap[static_cast<std::size_t>(i)] = kappa;
        mag[static_cast<std::size_t>(i)] = std::abs(detJ_imag_axis(p, bp, kappa, tol));
    }

    std::vector<double> candidates;
    for (std::size_t i = 1; i + 1 < kap.size(); ++i) {
        if (!(mag[i] <= mag[i - 1] && mag[i] <= mag[i + 1])) continue;
        // Golden-section search on |det J| inside the neighbouring bracket.
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = kap[i - 1], b = kap[i + 1];
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = std::abs(detJ_imag_axis(p, bp, c, tol));
        double fd = std::abs(detJ_imag_axis(p, bp, d, tol));
        int iter = 0;
        while (b - a > opt.refine_tol) {
            if (++iter > 400) throw Error(ErrorCode::RefinementStall, "golden-section search did not converge");
            if (fc <= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = std::abs(detJ_imag_axis(p, bp, c, tol));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = std::abs(detJ_imag_axis(p, bp, d, tol));
            }
            if (!(c > a && d < b && c <= d)) break;  // bracket at machine resolution
        }
        const double kappa = fc <= fd ? c : d;
        if (!candidates.empty() && std::abs(kappa - candidates.back()) <= 1e-6 * kappa) continue;
        candidates.push_back(kappa);
    }

    std::vector<BoundState> out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double kappa = candidates[i];
        // A circle that is wide compared to the integration noise, but never
        // reaches the real axis or a neighbouring candidate.
        double radius = std::max(10.0 * opt.refine_tol, 1e-4 * kappa);
        radius = std::min(radius, 0.5 * kappa);
        if (i > 0) radius = std::min(radius, 0.25 * (kappa - candidates[i - 1]));
        if (i + 1 < candidates.size()) radius = std::min(radius, 0.25 * (candidates[i + 1] - kappa));
        const int w = winding_number(p, bp, kappa, radius, 16, tol);
        if (w < 1) continue;

        BoundState bs;
        bs.kappa = kappa;
        bs.winding = w;
        const JostEvaluation je = jost_matrix(p, bp, cplx(0.0, kappa), tol);
        const cmat& j = je.J;
        // J(i kappa) is small against the Jost and boundary data it is built
        // from; rank is judged against that size, not against J itself.
        const double scale = std::hypot(je.f0.norm(), je.fp0.norm()) * std::hypot(bp.a.norm(), bp.b.norm());
        bs.det_residual = std::abs(j.determinant());
        bs.kernel_J = kernel(j, opt.kernel_tol, scale);
        bs.kernel_Jdag = kernel(cmat(j.adjoint()), opt.kernel_tol, scale);
        bs.multiplicity = w;
        if (bs.kernel_J.dim != w || bs.kernel_Jdag.dim != w) {
            bs.multiplicity_mismatch = true;
            bs.kernel_J = smallest_subspace(j, std::min<int>(w, static_cast<int>(j.cols())));
            bs.kernel_Jdag = smallest_subspace(j.adjoint(), std::min<int>(w, static_cast<int>(j.cols())));
        }
        out.push_back(std::move(bs));
    }
    return out;
}

int mu_from_s_zero(const cmat& s0, double tol) {
    Eigen::ComplexEigenSolver<cmat> es(s0);
    int mu = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const cplx lambda = es.eigenvalues()(i);
        if (std::abs(lambda - 1.0) <= tol) {
            ++mu;
        } else if (!(std::abs(lambda + 1.0) <= tol)) {
            std::ostringstream os;
            os << "S(0) eigenvalue (" << lambda.real() << ", " << lambda.imag() << ") is not +1 or -1";
            throw Error(ErrorCode::EigenvalueNotPlusMinusOne, os.str());
        }
    }
    return mu;
}

int mu_from_s_zero(const PotentialModel& p, const BoundaryPair& bp, double tol, double integrator_tol) {
    return mu_from_s_zero(s_at_zero(p, bp, integrator_tol), tol);
}

double detJ_smallk_order(const PotentialModel& p, const BoundaryPair& bp, double tol) {
    std::vector<double> ks, ds;
    for (double k : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
        ks.push_back(k);
        ds.push_back(std::abs(det_at(p, bp, k, tol)));
    }
    return loglog_slope(ks, ds);
}

double detJ_largek_order(const PotentialModel& p, const BoundaryPair& bp, double tol) {
    std::vector<double> ks, ds;
    for (int j = 6; j <= 9; ++j) {
        const double k = std::ldexp(1.0, j);
        ks.push_back(k);
        ds.push_back(std::abs(det_at(p, bp, k, tol)));
    }
    return loglog_slope(ks, ds);
}

DerivativeIdentity derivative_identity(const PotentialModel& p, const BoundaryPair& bp, const BoundState& bs,
                                       double h, const cvec* alpha_in) {
    if (bs.kernel_J.dim < 1) throw Error(ErrorCode::InvalidArgument, "bound state has an empty kernel");
    const double kappa = bs.kappa;
    if (!(h > 0.0 && h < kappa)) throw Error(ErrorCode::InvalidArgument, "difference step must be in (0, kappa)");
    const cvec alpha = alpha_in ? *alpha_in : cvec(bs.kernel_J.basis.col(0));
    const Eigen::Index n = bp.dim();
    // Tighter integration keeps the difference quotient clear of noise.
    constexpr double kFineTol = 1e-12;

    const JostValues f = jost_at_origin(p, SpectralPoint(cplx(0.0, kappa)), kFineTol);
    cmat lhs(2 * n, n);
    lhs.topRows(n) = f.f;
    lhs.bottomRows(n) = f.fp;
    cvec target(2 * n);
    target.head(n) = bp.a * alpha;
    target.tail(n) = bp.b * alpha;
    const cvec beta = lhs.colPivHouseholderQr().solve(target);

    DerivativeIdentity out;
    const double scale = std::max(target.norm(), std::numeric_limits<double>::min());
    out.match_residual = (lhs * beta - target).norm() / scale;
    if (!(out.match_residual <= 1e-6)) {
        std::ostringstream os;
        os << "phi alpha is not a decaying Jost combination (residual " << out.match_residual << ")";
        throw Error(ErrorCode::BetaMatchFailure, os.str());
    }

    const cmat jp = jost_matrix(p, bp, cplx(0.0, kappa + h), kFineTol).J;
    const cmat jm = jost_matrix(p, bp, cplx(0.0, kappa - h), kFineTol).J;
    const cmat jdot = (jp - jm) / (2.0 * kI * h);
    out.lhs = kI * (beta.adjoint() * jdot * alpha)(0, 0);
    out.rhs = 2.0 * kappa * decaying_norm_integral(p, kappa, beta, kFineTol);
    out.discrepancy = std::abs(out.lhs - out.rhs) / out.rhs;
    return out;
}

double derivative_identity_check(const PotentialModel& p, const BoundaryPair& bp, const BoundState& bs,
                                 double h) {
    return derivative_identity(p, bp, bs, h).discrepancy;
}

bool LevinsonReport::holds(double tol) const { return std::abs(identity_residual) / kPi <= tol; }

LevinsonReport levinson_verify(const PotentialModel& p, const BoundaryPair& bp, const PhaseGrid& grid,
                               const SearchOptions& search) {
    if (!(grid.k_min > 0.0) || grid.initial_points < 2)
        throw Error(ErrorCode::InvalidArgument, "bad phase grid");
    const double tol = search.integrator_tol;
    const CanonicalBoundary cb = canonicalize(bp);
    const AsymptoticModel model(p, bp);

    LevinsonReport r;
    r.n_M = cb.n_mixed;
    r.n_D = cb.n_dirichlet;
    r.n_N = cb.n_neumann;
    r.k_min = grid.k_min;

    auto det_s = [&](double k) { return s_matrix(p, bp, k, tol).S.determinant(); };

    // Push k_max out until S is within 0.05 of its limit.
    double kmax = grid.k_max > 0.0 ? grid.k_max : 1.0;
    kmax = std::max(kmax, 2.0 * grid.k_min);
    for (;;) {
        if (row_sum_norm(s_matrix(p, bp, kmax, tol).S - model.s_inf()) <= 0.05) break;
        kmax *= 2.0;
        if (kmax > 1e7) throw Error(ErrorCode::UnsettledTail, "S(k) does not approach its limit");
    }
    r.k_max = kmax;

    // Unwrap arg det S from k_max down to k_min, bisecting in log k while a
    // step reaches pi/4.
    r.phase_at_infinity = (r.n_D % 2) * kPi;
    std::vector<double> ks;
    for (int i = 0; i < grid.initial_points; ++i) {
        const double t = static_cast<double>(i) / (grid.initial_points - 1);
        ks.push_back(kmax * std::pow(grid.k_min / kmax, t));
    }
    ks.back() = grid.k_min;
    cplx d_prev = det_s(ks.front());
    double phase = nearest_branch(std::arg(d_prev), r.phase_at_infinity);
    r.phase_at_kmax = phase;
    std::vector<PhaseSample> trace{{ks.front(), phase}};
    long samples = static_cast<long>(ks.size());
    for (std::size_t i = 1; i < ks.size(); ++i) {
        double ka = ks[i - 1];
        // Work through [ks[i], ka] with a stack of pending right ends.
        std::vector<std::pair<double, cplx>> pending{{ks[i], det_s(ks[i])}};
        while (!pending.empty()) {
            const auto [kb, db] = pending.back();
            const double step = std::arg(db / d_prev);
            if (std::abs(step) < kPi / 4) {
                phase += step;
                trace.push_back({kb, phase});
                d_prev = db;
                ka = kb;
                pending.pop_back();
                continue;
            }
            const double mid = std::sqrt(ka * kb);
            if (++samples > grid.max_samples || !(mid < ka && mid > kb))
                throw Error(ErrorCode::PhaseStepTooLarge, "arg det S could not be resolved");
            pending.push_back({mid, det_s(mid)});
        }
    }
    r.phase_at_kmin = phase;
    std::reverse(trace.begin(), trace.end());
    r.trace = std::move(trace);

    const cmat s0 = s_at_zero(p, bp, tol);
    r.mu = mu_from_s_zero(s0);
    r.phase_at_zero = nearest_branch(std::arg(s0.determinant()), r.phase_at_kmin);

    r.bound_states = find_bound_states(p, bp, search);
    for (const BoundState& bs : r.bound_states) r.N_total += bs.multiplicity;

    r.identity_residual = (r.phase_at_zero - r.phase_at_infinity) -
                          kPi * (2 * r.N_total + r.mu - r.n_M - r.n_N);
    return r;
}

double levinson_dirichlet_convention(const LevinsonReport& report) {
    if (report.n_M != 0 || report.n_N != 0)
        throw Error(ErrorCode::NotDirichlet, "mixed or Neumann channels present");
    return 0.5 * (report.phase_at_zero - report.phase_at_infinity);
}

} // namespace halfline
