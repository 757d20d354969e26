#include "halfline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace halfline {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                bool strict) {
    if (!obj.is_object()) fail(where, "expected an object");
    if (!strict) return;
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : obj.items())
        if (!ok.count(item.key())) fail(where, "unknown key \"" + item.key() + "\"");
}

const json& require(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing key \"") + key + "\"");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

cplx complex_value(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (!v.is_array() || v.size() != 2) fail(where, "expected a complex number [re, im]");
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

cmat complex_matrix(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) fail(where, "expected a non-empty list of rows");
    const std::size_t rows = v.size();
    if (!v[0].is_array()) fail(where + "[0]", "expected a row");
    const std::size_t cols = v[0].size();
    cmat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string row = where + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != cols) fail(row, "rows must all have the same length");
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                complex_value(v[i][j], row + "[" + std::to_string(j) + "]");
    }
    return m;
}

std::vector<double> number_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<cmat> matrix_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected a list of matrices");
    std::vector<cmat> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(complex_matrix(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

double positive(const json& v, const std::string& where) {
    const double x = number(v, where);
    if (!(x > 0.0)) fail(where, "must be positive");
    return x;
}

std::string position(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

std::vector<double> KGrid::points() const {
    std::vector<double> out;
    if (k_count == 1) return {k_min};
    for (int i = 0; i < k_count; ++i) {
        const double t = static_cast<double>(i) / (k_count - 1);
        out.push_back(log_spacing ? k_min * std::pow(k_max / k_min, t) : k_min + t * (k_max - k_min));
    }
    out.back() = k_max;
    return out;
}

ProblemConfig parse_config(const std::string& text, bool strict) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "malformed JSON at " + position(text, e.byte > 0 ? e.byte - 1 : 0));
    }

    ProblemConfig cfg;
    check_keys(doc, "config", {"n", "boundary", "potential", "grid", "tolerances"}, strict);
    const json& n = require(doc, "n", "config");
    if (!n.is_number_integer() || n.get<long>() < 1) fail("n", "expected a positive integer");
    cfg.n = n.get<int>();

    const json& bnd = require(doc, "boundary", "config");
    if (!bnd.is_object()) fail("boundary", "expected an object");
    const std::string btype = require(bnd, "type", "boundary").is_string() ? bnd["type"].get<std::string>() : "";
    if (btype == "matrices") {
        check_keys(bnd, "boundary", {"type", "A", "B"}, strict);
        cfg.a = complex_matrix(require(bnd, "A", "boundary"), "boundary.A");
        cfg.b = complex_matrix(require(bnd, "B", "boundary"), "boundary.B");
    } else if (btype == "theta") {
        check_keys(bnd, "boundary", {"type", "theta"}, strict);
        cfg.theta_boundary = true;
        cfg.theta = number_list(require(bnd, "theta", "boundary"), "boundary.theta");
        for (std::size_t i = 0; i < cfg.theta.size(); ++i)
            if (!(cfg.theta[i] > 0.0 && cfg.theta[i] <= kPi))
                fail("boundary.theta[" + std::to_string(i) + "]", "must lie in (0, pi]");
        const BoundaryPair tp = theta_pair(cfg.theta);
        cfg.a = tp.a;
        cfg.b = tp.b;
    } else {
        fail("boundary.type", "expected \"matrices\" or \"theta\"");
    }

    const json& pot = require(doc, "potential", "config");
    if (!pot.is_object()) fail("potential", "expected an object");
    const std::string ptype = require(pot, "type", "potential").is_string() ? pot["type"].get<std::string>() : "";
    if (ptype == "zero") {
        check_keys(pot, "potential", {"type"}, strict);
        cfg.potential_kind = PotentialKind::Zero;
    } else if (ptype == "piecewise_constant") {
        check_keys(pot, "potential", {"type", "breakpoints", "values"}, strict);
        cfg.potential_kind = PotentialKind::PiecewiseConstant;
        cfg.breakpoints = number_list(require(pot, "breakpoints", "potential"), "potential.breakpoints");
        cfg.values = matrix_list(require(pot, "values", "potential"), "potential.values");
    } else if (ptype == "sampled_grid") {
        check_keys(pot, "potential", {"type", "xs", "values"}, strict);
        cfg.potential_kind = PotentialKind::SampledGrid;
        cfg.breakpoints = number_list(require(pot, "xs", "potential"), "potential.xs");
        cfg.values = matrix_list(require(pot, "values", "potential"), "potential.values");
    } else {
        fail("potential.type", "expected \"zero\", \"piecewise_constant\" or \"sampled_grid\"");
    }

    if (const auto it = doc.find("grid"); it != doc.end()) {
        const json& g = *it;
        check_keys(g, "grid", {"k_min", "k_max", "k_count", "spacing"}, strict);
        KGrid grid;
        grid.k_min = number(require(g, "k_min", "grid"), "grid.k_min");
        grid.k_max = number(require(g, "k_max", "grid"), "grid.k_max");
        const json& count = require(g, "k_count", "grid");
        if (!count.is_number_integer() || count.get<long>() < 1) fail("grid.k_count", "expected a positive integer");
        grid.k_count = count.get<int>();
        if (const auto s = g.find("spacing"); s != g.end()) {
            if (!s->is_string() || (*s != "linear" && *s != "log"))
                fail("grid.spacing", "expected \"linear\" or \"log\"");
            grid.log_spacing = *s == "log";
        }
        if (!(grid.k_min >= 0.0) || !(grid.k_max >= grid.k_min)) fail("grid", "need 0 <= k_min <= k_max");
        if (grid.log_spacing && !(grid.k_min > 0.0)) fail("grid", "log spacing needs k_min > 0");
        cfg.grid = grid;
    }

    if (const auto it = doc.find("tolerances"); it != doc.end()) {
        const json& t = *it;
        check_keys(t, "tolerances", {"integrator_tol", "kernel_tol", "class_tol", "refine_tol"}, strict);
        if (t.contains("integrator_tol")) cfg.tol.integrator_tol = positive(t["integrator_tol"], "tolerances.integrator_tol");
        if (t.contains("kernel_tol")) cfg.tol.kernel_tol = positive(t["kernel_tol"], "tolerances.kernel_tol");
        if (t.contains("class_tol")) cfg.tol.class_tol = positive(t["class_tol"], "tolerances.class_tol");
        if (t.contains("refine_tol")) cfg.tol.refine_tol = positive(t["refine_tol"], "tolerances.refine_tol");
    }
    return cfg;
}

ProblemConfig load_config(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), strict);
}

BoundaryPair ProblemConfig::boundary() const {
    const Eigen::Index dim = n;
    if (a.rows() != dim || a.cols() != dim || b.rows() != dim || b.cols() != dim) {
        std::ostringstream os;
        os << "boundary matrices must be " << n << "x" << n;
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    return validate_pair(a, b);
}

PotentialModel ProblemConfig::potential() const {
    switch (potential_kind) {
    case PotentialKind::Zero: return PotentialModel::zero(n);
    case PotentialKind::PiecewiseConstant:
    case PotentialKind::SampledGrid:
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i].rows() != n || values[i].cols() != n) {
                std::ostringstream os;
                os << "potential value " << i << " must be " << n << "x" << n;
                throw Error(ErrorCode::DimensionMismatch, os.str());
            }
        }
        if (values.empty()) throw Error(ErrorCode::BadGrid, "potential has no values");
        return potential_kind == PotentialKind::PiecewiseConstant
                   ? PotentialModel::piecewise_constant(breakpoints, values)
                   : PotentialModel::sampled_grid(breakpoints, values);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown potential kind");
}

} // namespace halfline
