// SPDX-License-Identifier: Apache-2.0
//
// Dense symmetric eigenvalues (Householder tridiagonalization followed by
// implicit-shift QL) and the spectral statistics computed from them.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rmtlab/errors.hpp"
#include "rmtlab/sym_matrix.hpp"

namespace rmtlab {

/// Eigenvalues of a symmetric matrix, sorted ascending.
struct Spectrum {
    std::vector<double> eigenvalues;

    std::size_t size() const noexcept { return eigenvalues.size(); }
};

namespace detail {

/// Reduce the symmetric matrix held in `a` (n x n, row-major, lower triangle
/// referenced) to tridiagonal form.  On return d holds the diagonal and e the
/// off-diagonal, e[i] coupling i and i + 1 (e[n-1] = 0).  `a` is destroyed.
inline void householder_tridiagonalize(std::vector<double>& a, std::size_t n,
                                       std::vector<double>& d, std::vector<double>& e)
{
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    if (n == 0) return;
    std::vector<double> u(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;
        const std::size_t off = k + 1;
        double tail = 0.0;
        for (std::size_t i = 1; i < m; ++i) {
            const double x = a[(off + i) * n + k];
            tail += x * x;
        }
        const double x0 = a[off * n + k];
        d[k] = a[k * n + k];
        if (tail == 0.0) {
            e[k] = x0;
            continue;
        }
        const double sigma = tail + x0 * x0;
        const double alpha = -std::copysign(std::sqrt(sigma), x0);
        const double h = sigma - x0 * alpha;
        u[0] = x0 - alpha;
        for (std::size_t i = 1; i < m; ++i) u[i] = a[(off + i) * n + k];
        e[k] = alpha;

        // p = B u / h with B the trailing block, lower triangle only.
        std::fill_n(p.begin(), m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double* r = a.data() + (off + i) * n + off;
            const double ui = u[i];
            double s = 0.0;
            double* pp = p.data();
            const double* uu = u.data();
#pragma omp simd reduction(+ : s)
            for (std::size_t j = 0; j < i; ++j) {
                s += r[j] * uu[j];
                pp[j] += r[j] * ui;
            }
            p[i] += s + r[i] * ui;
        }
        double up = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            p[i] /= h;
            up += u[i] * p[i];
        }
        const double kk = up / (2.0 * h);
        for (std::size_t i = 0; i < m; ++i) p[i] -= kk * u[i];  // p now holds q

        for (std::size_t i = 0; i < m; ++i) {
            double* r = a.data() + (off + i) * n + off;
            const double ui = u[i];
            const double qi = p[i];
            const double* uu = u.data();
            const double* qq = p.data();
#pragma omp simd
            for (std::size_t j = 0; j <= i; ++j) r[j] -= ui * qq[j] + qi * uu[j];
        }
    }
    if (n >= 2) {
        d[n - 2] = a[(n - 2) * n + (n - 2)];
        e[n - 2] = a[(n - 1) * n + (n - 2)];
    }
    d[n - 1] = a[(n - 1) * n + (n - 1)];
    e[n - 1] = 0.0;
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-type shifts.  d is overwritten with the (unsorted) eigenvalues.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, int max_sweeps = 50)
{
    const std::size_t n = d.size();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ == max_sweeps) {
                throw NumericalError("QL iteration did not converge for eigenvalue " +
                                     std::to_string(l));
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

}  // namespace detail

/// All eigenvalues of `matrix`, ascending.  Throws NumericalError when the QL
/// iteration exceeds 50 sweeps for one eigenvalue.
inline Spectrum eig_sym(const SymMatrix& matrix)
{
    const std::size_t n = matrix.size();
    std::vector<double> a(matrix.data().begin(), matrix.data().end());
    std::vector<double> d, e;
    detail::householder_tridiagonalize(a, n, d, e);
    a.clear();
    a.shrink_to_fit();
    detail::tridiagonal_ql(d, e);
    std::sort(d.begin(), d.end());
    return Spectrum{std::move(d)};
}

inline double op_norm(const Spectrum& s)
{
    if (s.eigenvalues.empty()) return 0.0;
    return std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back()));
}

/// Second largest eigenvalue modulus.
inline double second_norm(const Spectrum& s)
{
    if (s.size() < 2) throw DomainError("second_norm needs at least two eigenvalues");
    double first = 0.0;
    double second = 0.0;
    for (double l : s.eigenvalues) {
        const double a = std::abs(l);
        if (a >= first) {
            second = first;
            first = a;
        } else if (a > second) {
            second = a;
        }
    }
    return second;
}

//---------------------------------------------------------------------------//
/*!
 * Empirical spectral distribution: the uniform measure on scale * lambda_i.
 */
class Esd {
  public:
    Esd() = default;
    Esd(const Spectrum& s, double scale) : x_(s.eigenvalues)
    {
        for (double& v : x_) v *= scale;
        if (scale < 0.0) std::reverse(x_.begin(), x_.end());
    }
    /// From an arbitrary sample (sorted internally).
    explicit Esd(std::vector<double> sample) : x_(std::move(sample))
    {
        std::sort(x_.begin(), x_.end());
    }

    std::size_t size() const noexcept { return x_.size(); }
    std::span<const double> values() const noexcept { return x_; }

    /// (1/N) sum x_i^k.
    double moment(int k) const noexcept
    {
        if (x_.empty()) return 0.0;
        double s = 0.0;
        for (double v : x_) {
            double t = 1.0;
            for (int j = 0; j < k; ++j) t *= v;
            s += t;
        }
        return s / static_cast<double>(x_.size());
    }

    /// Right-continuous empirical CDF.
    double cdf(double x) const noexcept
    {
        if (x_.empty()) return 0.0;
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<double>(it - x_.begin()) / static_cast<double>(x_.size());
    }

    /// The sub-sample with |x| <= window.
    Esd within(double window) const
    {
        std::vector<double> kept;
        kept.reserve(x_.size());
        for (double v : x_) {
            if (std::abs(v) <= window) kept.push_back(v);
        }
        Esd out;
        out.x_ = std::move(kept);
        return out;
    }

  private:
    std::vector<double> x_;
};

/// Kolmogorov-Smirnov distance between an ESD and a continuous reference CDF.
/// At a group of tied sample points both one-sided limits of the empirical
/// CDF are compared.
template <class Cdf>
double ks(const Esd& esd, Cdf&& reference)
{
    const auto x = esd.values();
    const auto n = static_cast<double>(x.size());
    double dmax = 0.0;
    std::size_t a = 0;
    while (a < x.size()) {
        std::size_t b = a + 1;
        while (b < x.size() && x[b] == x[a]) ++b;
        const double f = reference(x[a]);
        dmax = std::max({dmax, std::abs(static_cast<double>(a) / n - f),
                         std::abs(static_cast<double>(b) / n - f)});
        a = b;
    }
    return dmax;
}

/// Two-sample KS distance, exact over the merged sample.
inline double ks(const Esd& lhs, const Esd& rhs)
{
    const auto x = lhs.values();
    const auto y = rhs.values();
    std::size_t i = 0;
    std::size_t j = 0;
    double dmax = 0.0;
    while (i < x.size() || j < y.size()) {
        double t;
        if (j == y.size() || (i < x.size() && x[i] <= y[j])) t = x[i];
        else t = y[j];
        while (i < x.size() && x[i] == t) ++i;
        while (j < y.size() && y[j] == t) ++j;
        const double fx = static_cast<double>(i) / static_cast<double>(x.size());
        const double fy = static_cast<double>(j) / static_cast<double>(y.size());
        dmax = std::max(dmax, std::abs(fx - fy));
    }
    return dmax;
}

//---------------------------------------------------------------------------//
struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    std::vector<double> densities;
    std::size_t below = 0;  // samples left of edges.front()
    std::size_t above = 0;  // samples right of edges.back()

    std::size_t bins() const noexcept { return counts.size(); }
};

/// Freedman-Diaconis bin count for `sample` restricted to [lo, hi].
inline std::size_t freedman_diaconis_bins(std::span<const double> sorted, double lo, double hi)
{
    const std::size_t n = sorted.size();
    if (n < 4 || !(hi > lo)) return 1;
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(n - 1);
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return i + 1 < n ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac : sorted[i];
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    if (!(width > 0.0)) return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const auto bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    return std::clamp<std::size_t>(bins, 1, 1000);
}

/// Histogram on [lo, hi].  Densities are normalized by the number of
/// samples inside the window; samples outside are tallied in below/above.
inline Histogram histogram(const Esd& esd, double lo, double hi, std::size_t bins = 0)
{
    const auto x = esd.values();
    if (bins == 0) {
        std::vector<double> inside;
        for (double v : x) {
            if (v >= lo && v <= hi) inside.push_back(v);
        }
        bins = freedman_diaconis_bins(inside, lo, hi);
    }
    Histogram h;
    h.edges.resize(bins + 1);
    const double w = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + w * static_cast<double>(b);
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    std::size_t inside = 0;
    for (double v : x) {
        if (v < lo) {
            ++h.below;
        } else if (v > hi) {
            ++h.above;
        } else {
            auto b = static_cast<std::size_t>((v - lo) / w);
            if (b >= bins) b = bins - 1;
            ++h.counts[b];
            ++inside;
        }
    }
    h.densities.assign(bins, 0.0);
    if (inside > 0) {
        for (std::size_t b = 0; b < bins; ++b) {
            h.densities[b] = static_cast<double>(h.counts[b]) /
                             (static_cast<double>(inside) * (h.edges[b + 1] - h.edges[b]));
        }
    }
    return h;
}

}  // namespace rmtlab
