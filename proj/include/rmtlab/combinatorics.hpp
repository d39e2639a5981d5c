// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "rmtlab/errors.hpp"

namespace rmtlab {

/// Catalan number C_ell = binom(2 ell, ell) / (ell + 1), exact.  C_35 is the
/// last one representable in 64 bits.
constexpr std::uint64_t catalan(unsigned ell)
{
    if (ell > 35) throw DomainError("catalan: result exceeds 64 bits");
    // C_{n+1} = C_n * 2(2n + 1) / (n + 2); the division is exact.
    unsigned __int128 c = 1;
    for (unsigned n = 0; n < ell; ++n) c = c * (2 * (2 * n + 1)) / (n + 2);
    return static_cast<std::uint64_t>(c);
}

/// n!! for odd n (and 1 for n <= 0).
constexpr std::uint64_t double_factorial(int n)
{
    std::uint64_t r = 1;
    for (; n > 1; n -= 2) r *= static_cast<std::uint64_t>(n);
    return r;
}

/// n (n - 1) ... (n - m + 1); zero once a factor reaches zero.
constexpr std::uint64_t falling_factorial(std::uint64_t n, unsigned m)
{
    std::uint64_t r = 1;
    for (unsigned j = 0; j < m; ++j) {
        if (n < j) return 0;
        r *= n - j;
    }
    return r;
}

}  // namespace rmtlab
