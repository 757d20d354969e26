#pragma once

// Jost solution, regular solution, Jost matrix and physical solution of the
// half-line matrix Schroedinger equation -psi'' + V psi = k^2 psi.

#include <vector>

#include "halfline/boundary.hpp"
#include "halfline/ode.hpp"
#include "halfline/potential.hpp"

namespace halfline {

inline constexpr double kDefaultIntegratorTol = 1e-10;

/// A spectral parameter in the closed upper half plane.  Imaginary parts in
/// [-1e-14, 0) are snapped to zero; anything lower is rejected.
class SpectralPoint {
public:
    SpectralPoint(cplx k);  // NOLINT: implicit on purpose, k is usually a literal
    SpectralPoint(double k) : SpectralPoint(cplx(k, 0.0)) {}

    cplx value() const { return k_; }
    operator cplx() const { return k_; }
    bool real() const { return k_.imag() == 0.0; }
    /// -k*, the point whose Jost values enter J(k).
    SpectralPoint mirror() const { return SpectralPoint(cplx(-k_.real(), k_.imag())); }

private:
    cplx k_;
};

/// f(k, x) and f'(k, x) at one point.
struct JostValues {
    cmat f;
    cmat fp;
    double err_est = 0.0;
};

/// J(k) together with the Jost values it was built from.  `f0`, `fp0` hold
/// f(-k*, 0) and f'(-k*, 0); on the imaginary axis -k* = k.
struct JostEvaluation {
    cplx k;
    cmat f0;
    cmat fp0;
    cmat J;
    double err_est = 0.0;
};

struct RegularSolutionTrace {
    cplx k;
    std::vector<double> xs;
    std::vector<cmat> phi;
    std::vector<cmat> phip;
    double err_est = 0.0;
};

ode::Options integrator_options(double tol);

/// f(k, x), f'(k, x) by backward integration of m = e^{-ikx} f from the end
/// of the support, where m = I and m' = 0 exactly.
JostValues jost_solution(const PotentialModel& p, SpectralPoint k, double x,
                         double tol = kDefaultIntegratorTol);

/// f(k, 0), f'(k, 0).
JostValues jost_at_origin(const PotentialModel& p, SpectralPoint k, double tol = kDefaultIntegratorTol);

/// J = f(-k*,0)^dagger B - f'(-k*,0)^dagger A from Jost values at -k*.
cmat assemble_jost_matrix(const JostValues& mirror, const BoundaryPair& bp);

JostEvaluation jost_matrix(const PotentialModel& p, const BoundaryPair& bp, SpectralPoint k,
                           double tol = kDefaultIntegratorTol);

/// phi(k, x) with phi(k,0) = A, phi'(k,0) = B, recorded on an increasing grid
/// that starts at 0.
RegularSolutionTrace regular_solution(const PotentialModel& p, const BoundaryPair& bp, cplx k,
                                      const std::vector<double>& xs, double tol = kDefaultIntegratorTol);

/// Wronskian F G' - F' G.
inline cmat wronskian(const cmat& f, const cmat& fp, const cmat& g, const cmat& gp) {
    return f * gp - fp * g;
}

enum class PhysicalPath {
    Jost,     // f(-k,x) + f(k,x) S(k)
    Regular,  // -2ik phi(k,x) J(k)^{-1}
};

/// Physical solution at real k != 0.  Throws SingularJost when J(k) cannot be
/// inverted reliably.
cmat physical_solution(const PotentialModel& p, const BoundaryPair& bp, double k, double x,
                       PhysicalPath path = PhysicalPath::Jost, double tol = kDefaultIntegratorTol);

/// Checked J(k)^{-1} style division: x J^{-1}; SingularJost above `max_cond`.
cmat divide_by_jost(const cmat& x, const cmat& j, double max_cond = 1e12);

} // namespace halfline
