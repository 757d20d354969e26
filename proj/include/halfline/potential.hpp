#pragma once

// Compactly supported selfadjoint matrix potentials and their high-energy
// moment matrices.

#include <complex>
#include <memory>
#include <vector>

#include "halfline/matkernel.hpp"

namespace halfline {

enum class PotentialKind { Zero, PiecewiseConstant, SampledGrid };

/// One interval of the support on which V is smooth.  For piecewise-constant
/// models `left == right`; sampled grids interpolate linearly between them.
struct Segment {
    double a = 0.0;
    double b = 0.0;
    cmat left;
    cmat right;

    cmat at(double x) const;
    bool constant() const { return left == right; }
};

/// Result of checking Hermiticity node by node.
struct PotentialDiagnostics {
    double hermiticity = 0.0;  // worst |V - V^dagger| over nodes
    int worst_index = -1;      // breakpoint / node index of the worst defect
};

/// A validated potential; V == 0 beyond support_end().
class PotentialModel {
public:
    static PotentialModel zero(Eigen::Index n);
    /// breakpoints x_0 = 0 < ... < x_m, values.size() == m.
    static PotentialModel piecewise_constant(std::vector<double> breakpoints, std::vector<cmat> values);
    /// nodes x_0 = 0 < ... < x_m, one value per node, linear interpolation.
    static PotentialModel sampled_grid(std::vector<double> xs, std::vector<cmat> values);

    PotentialKind kind() const { return kind_; }
    Eigen::Index dim() const { return n_; }
    double support_end() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<cmat>& values() const { return values_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// Integral of |V(x)| and of x |V(x)|.
    double l1_norm() const { return l1_; }
    double first_moment() const { return first_moment_; }
    double sup_norm() const;

    /// V(x); intervals are left-closed, zero past the support.
    cmat eval(double x) const;

    /// V -> M^dagger V M for a unitary M.
    PotentialModel conjugated(const cmat& m) const;

private:
    PotentialModel() = default;
    void finish();

    PotentialKind kind_ = PotentialKind::Zero;
    Eigen::Index n_ = 0;
    std::vector<double> breakpoints_;
    std::vector<cmat> values_;
    std::vector<Segment> segments_;
    double l1_ = 0.0;
    double first_moment_ = 0.0;
};

/// Hermiticity report without throwing; used by the CLI validator.
PotentialDiagnostics diagnose_potential_values(const std::vector<cmat>& values);

/// Block-diagonal direct sum of two potentials (supports are merged).
PotentialModel direct_sum(const PotentialModel& p, const PotentialModel& q);

/// The six moment matrices driving the large-k expansions.
///
///   Q1 = 1/2 int V,                Q2(k) = 1/2 int e^{2iky} V(y)
///   Q3 = 1/4 int_z int_{y<z} V(z)V(y)
///   Q4(k), Q5(k), Q6(k): the same double integral weighted by
///   e^{2ikz}, e^{2iky}, e^{2ik(z-y)}.
///
/// Piecewise-constant potentials use exact per-interval antiderivatives;
/// sampled grids use adaptive Gauss-Kronrod quadrature.
class MomentSet {
public:
    enum class Method { Auto, Quadrature };

    explicit MomentSet(std::shared_ptr<const PotentialModel> p, Method method = Method::Auto,
                       double rel_tol = 1e-10);

    const cmat& q1() const { return q1_; }
    const cmat& q3() const { return q3_; }
    cmat q2(cplx k) const;
    cmat q4(cplx k) const;
    cmat q5(cplx k) const;
    cmat q6(cplx k) const;

private:
    bool exact() const;

    std::shared_ptr<const PotentialModel> p_;
    Method method_;
    double tol_;
    double atol_ = 0.0;
    cmat q1_;
    cmat q3_;
};

MomentSet moments(const PotentialModel& p);

} // namespace halfline
