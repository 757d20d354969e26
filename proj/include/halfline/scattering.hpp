#pragma once

// Scattering matrix, zero-potential closed forms and high-energy models.

#include <memory>
#include <vector>

#include "halfline/boundary.hpp"
#include "halfline/jost.hpp"
#include "halfline/potential.hpp"

namespace halfline {

struct ScatteringSample {
    double k = 0.0;
    cmat S;
    double unitarity_defect = 0.0;  // |S S^dagger - I|
    double err_est = 0.0;
};

inline constexpr double kJostMaxCondition = 1e12;

/// S(k) = -J(-k) J(k)^{-1} for real k != 0.  Throws SingularJost when J(k)
/// is too ill-conditioned to invert.
ScatteringSample s_matrix(const PotentialModel& p, const BoundaryPair& bp, double k,
                          double tol = kDefaultIntegratorTol);

/// S(0) by Richardson extrapolation of S(k) over k = 1e-3 / 2^j.
cmat s_at_zero(const PotentialModel& p, const BoundaryPair& bp, double tol = kDefaultIntegratorTol);

struct FreeReference {
    cmat J0;      // B - ikA
    cmat J0_inv;
    cmat S0;      // assembled from the diagonal theta-form, M S~0 M^dagger
};

/// Zero-potential J0, J0^{-1} and S0 at k.  Throws SingularJ0 when B - ikA is
/// singular (a free bound state).
FreeReference s0_reference(const BoundaryPair& bp, cplx k);

/// Diagonal entries of S~0(k) for the theta-form.
cvec free_canonical_s(const std::vector<double>& theta, cplx k);

/// S(k) = S_inf + G(k)/(ik) + O(1/k^2).
class AsymptoticModel {
public:
    AsymptoticModel(const PotentialModel& p, const BoundaryPair& bp);

    const cmat& s_inf() const { return s_inf_; }
    const cmat& z0() const { return z0_; }
    const cmat& z1() const { return z1_; }
    const CanonicalBoundary& canonical() const { return canon_; }
    const MomentSet& moments() const { return *moments_; }

    cmat G(double k) const;
    /// S_inf + G(k)/(ik).
    cmat s_model(double k) const;

private:
    CanonicalBoundary canon_;
    std::shared_ptr<const MomentSet> moments_;
    cmat s_inf_;
    cmat z0_;
    cmat z1_;
};

AsymptoticModel asymptotic_model(const PotentialModel& p, const BoundaryPair& bp);

/// Truncated large-k expansions of f(-k*,0)^dagger and f'(-k*,0)^dagger.
struct OriginModel {
    cmat f_dag;
    cmat fp_dag;
};
OriginModel model_f_origin(const MomentSet& q, cplx k);

/// -ikA + B + (Q1 + Q2(k))A + P(k)/(ik).
cmat model_J(const MomentSet& q, const BoundaryPair& bp, cplx k);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace halfline
