#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature for scalar, complex or
// Eigen-matrix valued integrands.  Node placement depends only on the
// integrand values, so repeated runs are bit-identical.

#include <array>
#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

#include "halfline/error.hpp"
#include "halfline/matkernel.hpp"

namespace halfline::quad {

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
double magnitude(const T& v) {
    if constexpr (std::is_arithmetic_v<T>) {
        return std::abs(v);
    } else if constexpr (std::is_same_v<T, std::complex<double>>) {
        return std::abs(v);
    } else {
        return row_sum_norm(v);
    }
}

template <typename T, typename F>
void gk15(F& f, double a, double b, T& value, double& error) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(center);
    T kronrod = fc * kWgk[7];
    T gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        const T f1 = f(center - dx);
        const T f2 = f(center + dx);
        kronrod = kronrod + (f1 + f2) * kWgk[static_cast<std::size_t>(j)];
        if (j % 2 == 1) gauss = gauss + (f1 + f2) * kWg[static_cast<std::size_t>(j / 2)];
    }
    value = kronrod * half;
    error = magnitude<T>((kronrod - gauss) * half);
}

} // namespace detail

template <typename T>
struct Result {
    T value;
    double error = 0.0;
    int evaluations = 0;
};

/// Integrate f over [a, b] until the summed error estimate drops below
/// max(abs_tol, rel_tol * |value|).  Throws QuadratureFailure when the
/// subdivision budget runs out.
template <typename T, typename F>
Result<T> integrate(F f, double a, double b, double rel_tol = 1e-10, double abs_tol = 1e-14,
                    int max_intervals = 2000) {
    struct Piece {
        double a, b;
        T value;
        double error;
    };
    std::vector<Piece> pieces;
    Piece first{a, b, T{}, 0.0};
    detail::gk15<T>(f, a, b, first.value, first.error);
    pieces.push_back(first);
    int evals = 15;

    auto total = [&]() {
        T sum = pieces.front().value;
        double err = pieces.front().error;
        for (std::size_t i = 1; i < pieces.size(); ++i) {
            sum = sum + pieces[i].value;
            err += pieces[i].error;
        }
        return std::pair<T, double>{sum, err};
    };

    for (;;) {
        auto [sum, err] = total();
        const double target = std::max(abs_tol, rel_tol * detail::magnitude<T>(sum));
        if (err <= target) return Result<T>{sum, err, evals};
        if (static_cast<int>(pieces.size()) >= max_intervals)
            throw Error(ErrorCode::QuadratureFailure, "subdivision budget exhausted");

        std::size_t worst = 0;
        for (std::size_t i = 1; i < pieces.size(); ++i)
            if (pieces[i].error > pieces[worst].error) worst = i;
        const Piece p = pieces[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            // Interval cannot be split further; accept what we have.
            return Result<T>{sum, err, evals};
        }
        Piece left{p.a, mid, T{}, 0.0};
        Piece right{mid, p.b, T{}, 0.0};
        detail::gk15<T>(f, left.a, left.b, left.value, left.error);
        detail::gk15<T>(f, right.a, right.b, right.value, right.error);
        evals += 30;
        pieces[worst] = left;
        pieces.push_back(right);
    }
}

} // namespace halfline::quad
