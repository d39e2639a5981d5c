// SPDX-License-Identifier: Apache-2.0
//
// Closed-form limit laws: the semicircle of variance v, finite mixtures of
// semicircles, and the Curie-Weiss limiting variance.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rmtlab/combinatorics.hpp"
#include "rmtlab/curie_weiss.hpp"
#include "rmtlab/errors.hpp"

namespace rmtlab {

/// Density of the semicircle law with variance v, supported on [-2 sqrt v, 2 sqrt v].
inline double sc_pdf(double v, double x)
{
    if (!(v > 0.0)) throw DomainError("semicircle variance must be positive");
    const double r2 = 4.0 * v - x * x;
    if (r2 <= 0.0) return 0.0;
    return std::sqrt(r2) / (2.0 * std::numbers::pi * v);
}

inline double sc_cdf(double v, double x)
{
    if (!(v > 0.0)) throw DomainError("semicircle variance must be positive");
    const double edge = 2.0 * std::sqrt(v);
    if (x <= -edge) return 0.0;
    if (x >= edge) return 1.0;
    const double root = std::sqrt(4.0 * v - x * x);
    const double f = 0.5 + x * root / (4.0 * std::numbers::pi * v) +
                     std::asin(x / edge) / std::numbers::pi;
    return std::clamp(f, 0.0, 1.0);
}

/// k-th moment: zero for odd k, v^{k/2} C_{k/2} for even k.
inline double sc_moment(double v, int k)
{
    if (!(v > 0.0)) throw DomainError("semicircle variance must be positive");
    if (k < 0) throw DomainError("moment order must be nonnegative");
    if (k % 2 != 0) return 0.0;
    return std::pow(v, k / 2) * static_cast<double>(catalan(static_cast<unsigned>(k / 2)));
}

struct SemicircleComponent {
    double weight = 1.0;
    double variance = 1.0;  // 0 means a point mass at the origin
};

/// Finite mixture of semicircles.  Weights must be positive and sum to one.
class MixtureSC {
  public:
    MixtureSC() = default;
    explicit MixtureSC(std::vector<SemicircleComponent> parts) : parts_(std::move(parts))
    {
        if (parts_.empty()) throw ConfigError("mixture needs at least one component");
        double total = 0.0;
        for (const auto& c : parts_) {
            if (!(c.weight > 0.0)) throw ConfigError("mixture weights must be positive");
            if (!(c.variance >= 0.0)) throw ConfigError("mixture variances must be nonnegative");
            total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
    }

    static MixtureSC semicircle(double v) { return MixtureSC({{1.0, v}}); }

    const std::vector<SemicircleComponent>& components() const noexcept { return parts_; }

    double moment(int k) const
    {
        double m = 0.0;
        for (const auto& c : parts_) {
            if (c.variance == 0.0) m += c.weight * (k == 0 ? 1.0 : 0.0);
            else m += c.weight * sc_moment(c.variance, k);
        }
        return m;
    }

    double cdf(double x) const
    {
        double f = 0.0;
        for (const auto& c : parts_) {
            if (c.variance == 0.0) f += c.weight * (x >= 0.0 ? 1.0 : 0.0);
            else f += c.weight * sc_cdf(c.variance, x);
        }
        return f;
    }

    /// Density of the absolutely continuous part.
    double pdf(double x) const
    {
        double f = 0.0;
        for (const auto& c : parts_) {
            if (c.variance > 0.0) f += c.weight * sc_pdf(c.variance, x);
        }
        return f;
    }

    double support_radius() const
    {
        double v = 0.0;
        for (const auto& c : parts_) v = std::max(v, c.variance);
        return 2.0 * std::sqrt(v);
    }

  private:
    std::vector<SemicircleComponent> parts_{{1.0, 1.0}};
};

inline double mixture_moment(const MixtureSC& mix, int k) { return mix.moment(k); }
inline double mixture_cdf(const MixtureSC& mix, double x) { return mix.cdf(x); }

/// Limiting entry variance 1 - m(beta)^2 of the full Curie-Weiss ensemble.
inline double cw_variance(double beta)
{
    const double m = solve_m(beta);
    return 1.0 - m * m;
}

}  // namespace rmtlab
