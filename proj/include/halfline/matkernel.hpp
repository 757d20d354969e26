#pragma once

// Dense complex square-matrix kernels shared by every other module.
//
// Everything here is a free function template over Eigen expressions, so the
// kernels work for any real scalar type Eigen supports (double, long double,
// ...).  The rest of the library instantiates them with double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "halfline/error.hpp"

namespace halfline {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using cmat = ComplexMatrix<double>;
using cvec = ComplexVector<double>;

inline constexpr double kPi = std::numbers::pi;

/// Max over rows of the absolute row sum.  This is the matrix norm used for
/// every tolerance in the library.
template <typename Derived>
typename Derived::RealScalar row_sum_norm(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) return typename Derived::RealScalar(0);
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
    return row_sum_norm(m - m.adjoint());
}

template <typename Derived>
typename Derived::RealScalar unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
    using Plain = typename Derived::PlainObject;
    return row_sum_norm(u * u.adjoint() - Plain::Identity(u.rows(), u.cols()));
}

/// Unique positive Hermitian square root of a Hermitian positive-definite P.
///
/// `hermitian_tol` is relative to max(1, |P|); `positivity_tol` is relative to
/// the largest eigenvalue.
template <typename Derived>
typename Derived::PlainObject hermitian_sqrt(const Eigen::MatrixBase<Derived>& p,
                                             double hermitian_tol = 1e-10,
                                             double positivity_tol = 1e-13) {
    using Plain = typename Derived::PlainObject;
    using Real = typename Derived::RealScalar;
    if (p.rows() != p.cols())
        throw Error(ErrorCode::NotHermitian, "matrix is not square");
    const Real scale = std::max<Real>(Real(1), row_sum_norm(p));
    if (hermiticity_defect(p) > hermitian_tol * scale)
        throw Error(ErrorCode::NotHermitian, "input deviates from its adjoint");

    const Plain sym = (p + p.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<Plain> es(sym);
    const auto& ev = es.eigenvalues();
    const Real top = ev.maxCoeff();
    if (!(top > Real(0)) || ev.minCoeff() <= positivity_tol * top)
        throw Error(ErrorCode::NotPositiveDefinite, "smallest eigenvalue is not positive");

    const auto root = ev.cwiseSqrt().template cast<typename Derived::Scalar>();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

/// Orthonormal basis of the numerical null space.
template <typename Real>
struct KernelBasis {
    int dim = 0;
    ComplexMatrix<Real> basis; // n x dim, orthonormal columns
};

/// Right null space from the SVD: singular values at or below tol * sigma_max
/// count toward the kernel.  A zero matrix has a full kernel.
/// `reference`, when larger than sigma_max, replaces it as the scale; use it
/// when m is a difference of much larger terms.
template <typename Derived>
KernelBasis<typename Derived::RealScalar> kernel(const Eigen::MatrixBase<Derived>& m,
                                                 typename Derived::RealScalar tol = 1e-8,
                                                 typename Derived::RealScalar reference = 0) {
    using Real = typename Derived::RealScalar;
    using Plain = ComplexMatrix<Real>;
    const Eigen::Index n = m.cols();
    KernelBasis<Real> out;
    Eigen::JacobiSVD<Plain> svd(Plain(m), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Real smax = std::max(s.size() ? s(0) : Real(0), reference);
    if (smax == Real(0)) {
        out.dim = static_cast<int>(n);
        out.basis = Plain::Identity(n, n);
        return out;
    }
    Eigen::Index dim = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) <= tol * smax) ++dim;
    // Wide inputs have extra right singular vectors with implicit zero values.
    dim += n - s.size();
    out.dim = static_cast<int>(dim);
    out.basis = svd.matrixV().rightCols(dim);
    return out;
}

template <typename Derived>
typename Derived::RealScalar condition_number(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Derived::RealScalar;
    const ComplexMatrix<Real> dense = m;
    Eigen::JacobiSVD<ComplexMatrix<Real>> svd(dense);
    const auto& s = svd.singularValues();
    const Real smin = s(s.size() - 1);
    if (smin == Real(0)) return std::numeric_limits<Real>::infinity();
    return s(0) / smin;
}

template <typename Real>
struct UnitaryEig {
    std::vector<Real> zeta;  // half-phases in (0, pi]
    ComplexMatrix<Real> m;   // unitary, columns are eigenvectors
};

/// Half-phase of a unit-modulus eigenvalue on the branch (0, pi]; the
/// eigenvalue 1 maps to pi.
template <typename Real>
Real half_phase(const std::complex<Real>& lambda) {
    Real z = std::arg(lambda) / Real(2);
    if (z <= Real(0)) z += std::numbers::pi_v<Real>;
    return z;
}

/// Unitary eigendecomposition U = M diag(e^{2i zeta}) M^dagger.
///
/// M is obtained from the commuting Hermitian parts (U + U^dagger)/2 and
/// (U - U^dagger)/2i, so it is orthonormal even for degenerate spectra.
/// Eigenvalue clusters of the first part are split with the second part.
template <typename Derived>
UnitaryEig<typename Derived::RealScalar> unitary_eig(const Eigen::MatrixBase<Derived>& u,
                                                     double unitarity_tol = 1e-8,
                                                     double cluster_gap = 1e-8) {
    using Real = typename Derived::RealScalar;
    using Scalar = std::complex<Real>;
    using Plain = ComplexMatrix<Real>;
    const Eigen::Index n = u.rows();
    if (u.rows() != u.cols() || unitarity_defect(u) > unitarity_tol)
        throw Error(ErrorCode::NotUnitary, "matrix is not unitary within tolerance");

    const Plain h1 = (u + u.adjoint()) / Real(2);
    const Plain h2 = (u - u.adjoint()) / Scalar(0, 2);

    Eigen::SelfAdjointEigenSolver<Plain> es(h1);
    Plain m = es.eigenvectors();
    const auto& ev = es.eigenvalues();

    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && ev(stop) - ev(stop - 1) < cluster_gap) ++stop;
        const Eigen::Index len = stop - start;
        if (len > 1) {
            const Plain block = m.middleCols(start, len);
            const Plain sub = block.adjoint() * (h1 + h2) * block;
            Eigen::SelfAdjointEigenSolver<Plain> inner((sub + sub.adjoint()) / Real(2));
            m.middleCols(start, len) = block * inner.eigenvectors();
        }
        start = stop;
    }

    UnitaryEig<Real> out;
    const Plain d = m.adjoint() * u * m;
    out.zeta.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) out.zeta[static_cast<std::size_t>(j)] = half_phase(d(j, j));
    out.m = std::move(m);
    return out;
}

/// X * J^{-1} by a partial-pivoting solve.
template <typename DerivedX, typename DerivedJ>
ComplexMatrix<typename DerivedJ::RealScalar> right_divide(const Eigen::MatrixBase<DerivedX>& x,
                                                          const Eigen::MatrixBase<DerivedJ>& j) {
    using Plain = ComplexMatrix<typename DerivedJ::RealScalar>;
    Eigen::PartialPivLU<Plain> lu(j.adjoint());
    return lu.solve(Plain(x.adjoint())).adjoint();
}

/// Block-diagonal direct sum.
template <typename DerivedA, typename DerivedB>
ComplexMatrix<typename DerivedA::RealScalar> direct_sum(const Eigen::MatrixBase<DerivedA>& a,
                                                        const Eigen::MatrixBase<DerivedB>& b) {
    using Plain = ComplexMatrix<typename DerivedA::RealScalar>;
    Plain out = Plain::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

} // namespace halfline
