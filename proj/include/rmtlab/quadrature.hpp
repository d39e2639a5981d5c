// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "rmtlab/errors.hpp"

namespace rmtlab::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Result gk15(F& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * wgk[7];
    double gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += wgk[j] * s;
        if (j % 2 == 1) gauss += wg[j / 2] * s;
    }
    return {kron * h, std::abs((kron - gauss) * h)};
}

struct Piece {
    double a, b;
    Result r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
};

}  // namespace detail

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over the
/// union of [breaks[i], breaks[i+1]].  Throws NumericalError when the
/// requested accuracy is not reached within `max_pieces` subintervals.
template <class F>
Result integrate(F&& f, const std::vector<double>& breaks, double abs_tol, double rel_tol,
                 int max_pieces = 4000)
{
    std::priority_queue<detail::Piece> heap;
    double total = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto r = detail::gk15(f, breaks[i], breaks[i + 1]);
        heap.push({breaks[i], breaks[i + 1], r});
        total += r.value;
        err += r.error;
    }
    int pieces = static_cast<int>(heap.size());
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (pieces >= max_pieces) {
            throw NumericalError("adaptive quadrature did not converge");
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.r.value;
        err += left.error + right.error - worst.r.error;
        heap.push({worst.a, mid, left});
        heap.push({mid, worst.b, right});
        ++pieces;
    }
    // Re-sum to shed accumulated rounding from the incremental updates.
    double value = 0.0;
    double error = 0.0;
    while (!heap.empty()) {
        value += heap.top().r.value;
        error += heap.top().r.error;
        heap.pop();
    }
    return {value, error};
}

template <class F>
Result integrate(F&& f, double a, double b, double abs_tol, double rel_tol)
{
    return integrate(std::forward<F>(f), std::vector<double>{a, b}, abs_tol, rel_tol);
}

}  // namespace rmtlab::quad
