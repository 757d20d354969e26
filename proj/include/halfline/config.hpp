#pragma once

// Problem configuration documents (JSON).  Complex numbers are [re, im]
// pairs; matrices are row-major nested lists.

#include <optional>
#include <string>
#include <vector>

#include "halfline/boundary.hpp"
#include "halfline/potential.hpp"

namespace halfline {

struct KGrid {
    double k_min = 0.0;
    double k_max = 0.0;
    int k_count = 0;
    bool log_spacing = false;

    std::vector<double> points() const;
};

struct Tolerances {
    double integrator_tol = 1e-10;
    double kernel_tol = 1e-8;
    double class_tol = 1e-9;
    double refine_tol = 1e-10;
};

/// Parsed but not yet validated problem.  Boundary and potential data are
/// kept raw so the validator can report on broken inputs.
struct ProblemConfig {
    int n = 0;
    bool theta_boundary = false;
    std::vector<double> theta;
    cmat a;
    cmat b;

    PotentialKind potential_kind = PotentialKind::Zero;
    std::vector<double> breakpoints;
    std::vector<cmat> values;

    std::optional<KGrid> grid;
    Tolerances tol;

    /// Validated pair; theta boundaries expand to (-diag sin, diag cos).
    BoundaryPair boundary() const;
    PotentialModel potential() const;
};

/// Throws ParseError naming the line/column or the offending field.  In
/// strict mode unknown keys are rejected.
ProblemConfig parse_config(const std::string& text, bool strict = true);
ProblemConfig load_config(const std::string& path, bool strict = true);

} // namespace halfline
