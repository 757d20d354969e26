#pragma once

// Selfadjoint vertex conditions  -B^dagger psi(0) + A^dagger psi'(0) = 0.

#include <vector>

#include "halfline/matkernel.hpp"

namespace halfline {

/// A validated pair (A, B): A^dagger B is Hermitian and A^dagger A + B^dagger B
/// is positive definite.  Construct through validate_pair().
struct BoundaryPair {
    cmat a;
    cmat b;

    Eigen::Index dim() const { return a.rows(); }
};

/// Residuals of the two defining conditions, reported by `validate`.
struct BoundaryDiagnostics {
    double selfadjointness = 0.0; // |A^dagger B - B^dagger A| / (|A| + |B|)^2
    double rank_ratio = 0.0;      // min/max eigenvalue of A^dagger A + B^dagger B
};

BoundaryDiagnostics diagnose_pair(const cmat& a, const cmat& b);

/// Throws DimensionMismatch, SelfadjointnessViolated or RankDeficient.
BoundaryPair validate_pair(const cmat& a, const cmat& b);

/// The diagonal pair (-diag sin theta, diag cos theta).
BoundaryPair theta_pair(const std::vector<double>& theta);

/// E = (A^dagger A + B^dagger B)^{1/2}.
cmat compute_E(const BoundaryPair& bp);

/// U = (B - iA)(B + iA)^{-1}, unitary for every valid pair.
cmat compute_U(const BoundaryPair& bp);

enum class ChannelType { Mixed, Dirichlet, Neumann };

/// Diagonal theta-form of a boundary pair with the transformation data that
/// maps the original pair onto it:  A~ = M^dagger A T1 M T2,
/// B~ = M^dagger B T1 M T2.
struct CanonicalBoundary {
    std::vector<double> theta; // mixed, then Dirichlet (pi), then Neumann (pi/2)
    cmat m;                    // unitary
    cmat t1;                   // (B + iA)^{-1}
    cmat t2;                   // B~ + iA~
    int n_mixed = 0;
    int n_dirichlet = 0;
    int n_neumann = 0;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(theta.size()); }
    ChannelType channel(std::size_t j) const;
    BoundaryPair pair() const { return theta_pair(theta); }
};

inline constexpr double kDefaultClassTol = 1e-9;

CanonicalBoundary canonicalize(const BoundaryPair& bp, double class_tol = kDefaultClassTol);

/// max(|M^dagger A T1 M T2 - A~|, |M^dagger B T1 M T2 - B~|).
double reconstruction_residual(const BoundaryPair& bp, const CanonicalBoundary& cb);

/// (A T, B T).  Throws SingularTransform when T is numerically singular.
BoundaryPair right_multiply(const BoundaryPair& bp, const cmat& t);

/// (M^dagger A M, M^dagger B M).
BoundaryPair conjugate(const BoundaryPair& bp, const cmat& m);

/// (M^dagger A T1 M T2, M^dagger B T1 M T2).
BoundaryPair transform_pair(const BoundaryPair& bp, const cmat& m, const cmat& t1, const cmat& t2);

} // namespace halfline
