#include "halfline/commands.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "halfline/scattering.hpp"
#include "halfline/spectrum.hpp"

namespace halfline {

namespace {

using json = nlohmann::json;

const cplx kI{0.0, 1.0};

json to_json(const cmat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

double integrator_tol(const ProblemConfig& cfg, const CommandOptions& opt) {
    return opt.tol_integrator.value_or(cfg.tol.integrator_tol);
}

SearchOptions search_options(const ProblemConfig& cfg, const CommandOptions& opt) {
    SearchOptions s;
    s.integrator_tol = integrator_tol(cfg, opt);
    s.kernel_tol = cfg.tol.kernel_tol;
    s.refine_tol = cfg.tol.refine_tol;
    if (opt.kappa_max) s.kappa_max = *opt.kappa_max;
    return s;
}

json bound_state_json(const BoundState& bs) {
    return {{"kappa", bs.kappa},
            {"multiplicity", bs.multiplicity},
            {"winding", bs.winding},
            {"kernel_dim", bs.kernel_J.dim},
            {"kernel_adjoint_dim", bs.kernel_Jdag.dim},
            {"multiplicity_mismatch", bs.multiplicity_mismatch},
            {"det_residual", bs.det_residual}};
}

} // namespace

int exit_status(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Validation: return kExitValidation;
    case ErrorKind::Numerical: return kExitNumerical;
    case ErrorKind::Parse: return kExitParse;
    }
    return kExitNumerical;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"validate",   "canonicalize", "scattering",
                                                "boundstates", "levinson",     "asymptotics"};
    return names;
}

CommandResult cmd_validate(const ProblemConfig& cfg) {
    json doc;
    json errors = json::array();
    auto record = [&](const Error& e) { errors.push_back({{"code", std::string(to_string(e.code()))}, {"message", e.what()}}); };

    json boundary;
    if (cfg.a.rows() == cfg.n && cfg.a.cols() == cfg.n && cfg.b.rows() == cfg.n && cfg.b.cols() == cfg.n) {
        const BoundaryDiagnostics d = diagnose_pair(cfg.a, cfg.b);
        boundary["selfadjointness_residual"] = d.selfadjointness;
        boundary["rank_ratio"] = d.rank_ratio;
    }
    try {
        cfg.boundary();
    } catch (const Error& e) {
        record(e);
    }
    doc["boundary"] = boundary;

    json potential;
    const PotentialDiagnostics pd = diagnose_potential_values(cfg.values);
    potential["hermiticity_residual"] = pd.hermiticity;
    potential["worst_index"] = pd.worst_index;
    try {
        const PotentialModel p = cfg.potential();
        potential["l1_norm"] = p.l1_norm();
        potential["first_moment"] = p.first_moment();
        potential["support_end"] = p.support_end();
    } catch (const Error& e) {
        record(e);
    }
    doc["potential"] = potential;
    doc["errors"] = errors;
    doc["ok"] = errors.empty();
    return {errors.empty() ? kExitOk : kExitValidation, dump(doc)};
}

CommandResult cmd_canonicalize(const ProblemConfig& cfg) {
    const BoundaryPair bp = cfg.boundary();
    const CanonicalBoundary cb = canonicalize(bp, cfg.tol.class_tol);
    json doc;
    doc["theta"] = cb.theta;
    doc["n_M"] = cb.n_mixed;
    doc["n_D"] = cb.n_dirichlet;
    doc["n_N"] = cb.n_neumann;
    doc["M"] = to_json(cb.m);
    doc["T1"] = to_json(cb.t1);
    doc["T2"] = to_json(cb.t2);
    doc["reconstruction_residual"] = reconstruction_residual(bp, cb);
    return {kExitOk, dump(doc)};
}

CommandResult cmd_scattering(const ProblemConfig& cfg, const CommandOptions& opt) {
    if (!cfg.grid) throw Error(ErrorCode::InvalidArgument, "scattering needs a \"grid\" section");
    const BoundaryPair bp = cfg.boundary();
    const PotentialModel p = cfg.potential();
    const double tol = integrator_tol(cfg, opt);
    const Eigen::Index n = bp.dim();

    std::ostringstream out;
    out << "k";
    for (Eigen::Index i = 1; i <= n; ++i)
        for (Eigen::Index j = 1; j <= n; ++j) out << ",S_re_" << i << "_" << j << ",S_im_" << i << "_" << j;
    out << ",unitarity_defect,det_phase_unwrapped,status\n";

    bool have_phase = false;
    double phase = 0.0;
    cplx last_det = 1.0;
    for (double k : cfg.grid->points()) {
        cmat s;
        std::string status = "ok";
        try {
            s = k == 0.0 ? s_at_zero(p, bp, tol) : s_matrix(p, bp, k, tol).S;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Numerical) throw;
            status = std::string(to_string(e.code()));
        }
        out << format_double(k);
        if (status != "ok") {
            for (Eigen::Index i = 0; i < 2 * n * n + 2; ++i) out << ",nan";
            out << "," << status << "\n";
            continue;
        }
        const cplx det = s.determinant();
        phase = have_phase ? phase + std::arg(det / last_det) : std::arg(det);
        have_phase = true;
        last_det = det;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                out << "," << format_double(s(i, j).real()) << "," << format_double(s(i, j).imag());
        out << "," << format_double(row_sum_norm(s * s.adjoint() - cmat::Identity(n, n))) << ","
            << format_double(phase) << ",ok\n";
    }
    return {kExitOk, out.str()};
}

CommandResult cmd_boundstates(const ProblemConfig& cfg, const CommandOptions& opt) {
    const BoundaryPair bp = cfg.boundary();
    const PotentialModel p = cfg.potential();
    const SearchOptions search = search_options(cfg, opt);
    const auto states = find_bound_states(p, bp, search);
    json list = json::array();
    int total = 0;
    for (const BoundState& bs : states) {
        list.push_back(bound_state_json(bs));
        total += bs.multiplicity;
    }
    json doc;
    doc["bound_states"] = list;
    doc["N_total"] = total;
    doc["kappa_min"] = search.kappa_min;
    doc["kappa_max"] = search.kappa_max > 0.0 ? search.kappa_max : default_kappa_max(p, bp);
    return {kExitOk, dump(doc)};
}

CommandResult cmd_levinson(const ProblemConfig& cfg, const CommandOptions& opt) {
    const BoundaryPair bp = cfg.boundary();
    const PotentialModel p = cfg.potential();
    PhaseGrid grid;
    if (opt.k_max) grid.k_max = *opt.k_max;
    const LevinsonReport r = levinson_verify(p, bp, grid, search_options(cfg, opt));

    json doc;
    json states = json::array();
    for (const BoundState& bs : r.bound_states) states.push_back(bound_state_json(bs));
    doc["bound_states"] = states;
    doc["N_total"] = r.N_total;
    doc["mu"] = r.mu;
    doc["n_M"] = r.n_M;
    doc["n_D"] = r.n_D;
    doc["n_N"] = r.n_N;
    doc["k_min"] = r.k_min;
    doc["k_max"] = r.k_max;
    doc["phase_at_kmin"] = r.phase_at_kmin;
    doc["phase_at_kmax"] = r.phase_at_kmax;
    doc["phase_at_zero"] = r.phase_at_zero;
    doc["phase_at_infinity"] = r.phase_at_infinity;
    doc["identity_residual"] = r.identity_residual;
    doc["identity_residual_over_pi"] = r.identity_residual / kPi;
    doc["identity_holds"] = r.holds();
    doc["dirichlet_delta_at_zero"] = (r.n_M == 0 && r.n_N == 0) ? json(levinson_dirichlet_convention(r)) : json();
    json trace = json::array();
    for (const PhaseSample& s : r.trace) trace.push_back({s.k, s.phase});
    doc["phase_trace"] = trace;
    return {r.holds() ? kExitOk : kExitNumerical, dump(doc)};
}

CommandResult cmd_asymptotics(const ProblemConfig& cfg, const CommandOptions& opt) {
    const BoundaryPair bp = cfg.boundary();
    const PotentialModel p = cfg.potential();
    const double tol = integrator_tol(cfg, opt);
    const AsymptoticModel model(p, bp);
    const Eigen::Index n = bp.dim();
    const cmat id = cmat::Identity(n, n);

    std::vector<double> ks, r_model, r_leading, r_jj0, det_j;
    std::ostringstream out;
    out << "k,s_model_residual,s_leading_residual,jj0_residual,abs_det_J\n";
    for (int e = 4; e <= 8; ++e) {
        const double k = std::ldexp(1.0, e);
        const cmat s = s_matrix(p, bp, k, tol).S;
        const cmat j = jost_matrix(p, bp, k, tol).J;
        const cmat j0 = bp.b - kI * k * bp.a;
        const cmat corr = (model.moments().q1() + model.moments().q2(k) * model.s_inf()) / (kI * k);
        ks.push_back(k);
        r_model.push_back(row_sum_norm(s - model.s_model(k)));
        r_leading.push_back(row_sum_norm(s - model.s_inf()));
        r_jj0.push_back(row_sum_norm(right_divide(j, j0) - id + corr));
        det_j.push_back(std::abs(j.determinant()));
        out << format_double(k) << "," << format_double(r_model.back()) << "," << format_double(r_leading.back())
            << "," << format_double(r_jj0.back()) << "," << format_double(det_j.back()) << "\n";
    }
    // Residual columns report decay orders, the determinant column its growth order.
    out << "order," << format_double(-loglog_slope(ks, r_model)) << ","
        << format_double(-loglog_slope(ks, r_leading)) << "," << format_double(-loglog_slope(ks, r_jj0)) << ","
        << format_double(loglog_slope(ks, det_j)) << "\n";
    return {kExitOk, out.str()};
}

CommandResult run_command(const std::string& name, const ProblemConfig& cfg, const CommandOptions& opt) {
    if (name == "validate") return cmd_validate(cfg);
    if (name == "canonicalize") return cmd_canonicalize(cfg);
    if (name == "scattering") return cmd_scattering(cfg, opt);
    if (name == "boundstates") return cmd_boundstates(cfg, opt);
    if (name == "levinson") return cmd_levinson(cfg, opt);
    if (name == "asymptotics") return cmd_asymptotics(cfg, opt);
    throw Error(ErrorCode::InvalidArgument, "unknown command " + name);
}

} // namespace halfline
