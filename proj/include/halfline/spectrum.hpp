#pragma once

// Bound states on the positive imaginary axis and the Levinson phase count.

#include <vector>

#include "halfline/boundary.hpp"
#include "halfline/jost.hpp"
#include "halfline/potential.hpp"

namespace halfline {

/// det J(i kappa).
cplx detJ_imag_axis(const PotentialModel& p, const BoundaryPair& bp, double kappa,
                    double tol = kDefaultIntegratorTol);

struct BoundState {
    double kappa = 0.0;     // bound state at k = i kappa, energy -kappa^2
    int multiplicity = 0;
    KernelBasis<double> kernel_J;
    KernelBasis<double> kernel_Jdag;
    int winding = 0;
    double det_residual = 0.0;  // |det J(i kappa)|
    bool multiplicity_mismatch = false;  // kernel dimension disagreed with the winding count
};

struct SearchOptions {
    double kappa_min = 1e-4;
    double kappa_max = 0.0;  // 0 picks default_kappa_max()
    int grid_points = 600;
    double refine_tol = 1e-10;
    double kernel_tol = 1e-8;
    double integrator_tol = kDefaultIntegratorTol;
};

/// 1 + int |V| + max |cot theta| over mixed channels.  A heuristic bracket.
double default_kappa_max(const PotentialModel& p, const BoundaryPair& bp);

/// Argument-principle count of zeros of det J inside the circle of `radius`
/// about i*center_kappa.  Sampling doubles until every phase step is below
/// pi/2; PhaseStepTooLarge after that fails.
int winding_number(const PotentialModel& p, const BoundaryPair& bp, double center_kappa, double radius,
                   int samples = 16, double tol = kDefaultIntegratorTol);

std::vector<BoundState> find_bound_states(const PotentialModel& p, const BoundaryPair& bp,
                                          const SearchOptions& opt = {});

/// Number of eigenvalues of S(0) within tol of +1; the rest must sit within
/// tol of -1 (EigenvalueNotPlusMinusOne otherwise).
int mu_from_s_zero(const cmat& s_zero, double tol = 1e-3);
int mu_from_s_zero(const PotentialModel& p, const BoundaryPair& bp, double tol = 1e-3,
                   double integrator_tol = kDefaultIntegratorTol);

/// Fitted exponent of |det J(k)| ~ k^mu over k = 1e-2 / 2^j, j = 0..3.
double detJ_smallk_order(const PotentialModel& p, const BoundaryPair& bp,
                         double tol = kDefaultIntegratorTol);

/// Fitted exponent of |det J(k)| over k = 2^6 .. 2^9.
double detJ_largek_order(const PotentialModel& p, const BoundaryPair& bp,
                         double tol = kDefaultIntegratorTol);

struct DerivativeIdentity {
    cplx lhs;          // i beta^dagger dJ/dk(i kappa) alpha
    double rhs = 0.0;  // 2 kappa int |phi(i kappa, x) alpha|^2
    double match_residual = 0.0;
    double discrepancy = 0.0;  // |lhs - rhs| / rhs
};

/// Checks i beta^dagger J'(i kappa) alpha = 2 kappa int |phi alpha|^2 for the
/// first kernel vector alpha.  beta solves f(i kappa, 0) beta = A alpha,
/// f'(i kappa, 0) beta = B alpha; BetaMatchFailure if that residual exceeds 1e-6.
DerivativeIdentity derivative_identity(const PotentialModel& p, const BoundaryPair& bp, const BoundState& bs,
                                       double h = 1e-5, const cvec* alpha = nullptr);

double derivative_identity_check(const PotentialModel& p, const BoundaryPair& bp, const BoundState& bs,
                                 double h = 1e-5);

struct PhaseGrid {
    double k_min = 1e-3;
    double k_max = 0.0;  // 0 grows from 1 by doubling until |S - S_inf| <= 0.05
    int initial_points = 64;
    long max_samples = 1L << 20;
};

struct PhaseSample {
    double k;
    double phase;
};

struct LevinsonReport {
    std::vector<BoundState> bound_states;
    int N_total = 0;
    int mu = 0;
    int n_M = 0;
    int n_D = 0;
    int n_N = 0;
    double k_min = 0.0;
    double k_max = 0.0;
    double phase_at_kmin = 0.0;
    double phase_at_kmax = 0.0;
    double phase_at_zero = 0.0;
    double phase_at_infinity = 0.0;
    double identity_residual = 0.0;
    std::vector<PhaseSample> trace;  // unwrapped arg det S, increasing k

    /// |identity_residual| / pi <= tol.
    bool holds(double tol = 1e-3) const;
};

LevinsonReport levinson_verify(const PotentialModel& p, const BoundaryPair& bp, const PhaseGrid& grid = {},
                               const SearchOptions& search = {});

/// delta_S(0+) with delta_S(+inf) = 0 for a purely Dirichlet problem.
/// Throws NotDirichlet otherwise.
double levinson_dirichlet_convention(const LevinsonReport& report);

} // namespace halfline
