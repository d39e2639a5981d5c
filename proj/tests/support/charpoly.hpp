// SPDX-License-Identifier: Apache-2.0
//
// Test oracle: eigenvalues of a small symmetric matrix as roots of its
// characteristic polynomial, all in long double.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rmtlab/sym_matrix.hpp"

namespace rmtlab::oracle {

using Poly = std::vector<long double>;  // coefficients, highest degree first

/// det(x I - A) by Faddeev-LeVerrier.
inline Poly char_poly(const SymMatrix& a)
{
    const std::size_t n = a.size();
    using Mat = std::vector<long double>;
    Mat A(n * n), Mk(n * n, 0.0L), AM(n * n);
    for (std::size_t i = 0; i < n * n; ++i) A[i] = a.data()[i];
    Poly c(n + 1, 0.0L);
    c[0] = 1.0L;
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{k-1} I, with M_0 = 0
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                long double s = 0.0L;
                for (std::size_t l = 0; l < n; ++l) s += A[i * n + l] * Mk[l * n + j];
                AM[i * n + j] = s;
            }
        }
        for (std::size_t i = 0; i < n; ++i) AM[i * n + i] += c[k - 1];
        Mk = AM;
        long double tr = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 0; l < n; ++l) tr += A[i * n + l] * Mk[l * n + i];
        }
        c[k] = -tr / static_cast<long double>(k);
    }
    return c;
}

inline long double horner(const Poly& p, long double x, long double* dp = nullptr)
{
    long double v = 0.0L, d = 0.0L;
    for (long double c : p) {
        d = d * x + v;
        v = v * x + c;
    }
    if (dp) *dp = d;
    return v;
}

/// Roots of a polynomial known to have only real roots, ascending.  Newton
/// started above the largest root converges monotonically to it; the root is
/// then deflated and the next one found the same way.  Each root is finally
/// polished on the original polynomial.
inline std::vector<long double> real_roots(const Poly& p)
{
    const std::size_t n = p.size() - 1;
    std::vector<long double> roots;
    Poly q = p;
    for (std::size_t r = 0; r < n; ++r) {
        // Cauchy bound
        long double bound = 0.0L;
        for (std::size_t i = 1; i < q.size(); ++i) bound = std::max(bound, std::abs(q[i] / q[0]));
        long double x = 1.0L + bound;
        for (int it = 0; it < 2000; ++it) {
            long double d;
            const long double v = horner(q, x, &d);
            if (d == 0.0L) break;
            const long double next = x - v / d;
            if (!(next < x)) break;
            x = next;
        }
        roots.push_back(x);
        Poly nq(q.size() - 1);
        long double acc = 0.0L;
        for (std::size_t i = 0; i + 1 < q.size(); ++i) {
            acc = acc * x + q[i];
            nq[i] = acc;
        }
        q = nq;
    }
    for (auto& x : roots) {
        long double y = x;
        for (int it = 0; it < 8; ++it) {
            long double d;
            const long double v = horner(p, y, &d);
            if (d == 0.0L) break;
            y -= v / d;
        }
        // A polish that wanders off belongs to a neighbouring root in a cluster.
        if (std::abs(y - x) < 1e-9L * (1.0L + std::abs(x))) x = y;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline std::vector<long double> charpoly_eigenvalues(const SymMatrix& a)
{
    return real_roots(char_poly(a));
}

}  // namespace rmtlab::oracle
