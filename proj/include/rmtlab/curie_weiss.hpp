// SPDX-License-Identifier: Apache-2.0
//
// Exact Curie-Weiss machinery.
//
// Spins x in {-1, +1}^M carry weight exp(beta S^2 / (2M)) with S = sum x_i.
// Everything here goes through the distribution of the total spin S, which
// has M + 1 atoms, so exact sampling and exact correlations cost O(M).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rmtlab/combinatorics.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/quadrature.hpp"
#include "rmtlab/sampling.hpp"

namespace rmtlab {

struct CWParams {
    double beta = 0.0;
    std::size_t M = 1;

    void validate() const
    {
        if (!(beta >= 0.0) || !std::isfinite(beta)) {
            throw ConfigError("Curie-Weiss beta must be finite and >= 0");
        }
        if (M < 1) throw ConfigError("Curie-Weiss needs at least one spin");
    }
};

//---------------------------------------------------------------------------//
/*!
 * Magnetization m(beta): 0 for beta <= 1, otherwise the positive root of
 * tanh(beta m) = m.  Bisection followed by a Newton polish.
 */
inline double solve_m(double beta)
{
    if (!(beta >= 0.0)) throw DomainError("solve_m: beta must be >= 0");
    if (beta <= 1.0) return 0.0;
    const auto f = [beta](double m) { return std::tanh(beta * m) - m; };
    double lo = 1e-6;
    while (f(lo) <= 0.0 && lo > 1e-300) lo *= 0.5;
    double hi = 1.0 - 1e-12;
    if (f(hi) >= 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    double m = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double th = std::tanh(beta * m);
        const double df = beta * (1.0 - th * th) - 1.0;
        if (df == 0.0) break;
        const double next = m - (th - m) / df;
        if (!(next > lo * 0.5 && next < 1.0)) break;
        m = next;
    }
    return m;
}

//---------------------------------------------------------------------------//
/*!
 * Exact law of the total spin S in {-M, -M+2, ..., M}, stored by the number
 * of up-spins k = (M + S) / 2.  Computed in the log domain and filled
 * symmetrically so that p(S) == p(-S) bit for bit.
 */
class MagnetizationPMF {
  public:
    MagnetizationPMF() = default;

    explicit MagnetizationPMF(const CWParams& params) : params_(params)
    {
        params.validate();
        const std::size_t M = params.M;
        const double m = static_cast<double>(M);
        log_w_.resize(M + 1);
        const double lg_m = std::lgamma(m + 1.0);
        for (std::size_t k = 0; 2 * k <= M; ++k) {
            const double s = 2.0 * static_cast<double>(k) - m;
            const double lw = lg_m - std::lgamma(static_cast<double>(k) + 1.0) -
                              std::lgamma(m - static_cast<double>(k) + 1.0) +
                              params.beta * s * s / (2.0 * m);
            log_w_[k] = lw;
            log_w_[M - k] = lw;
        }
        const double mx = *std::max_element(log_w_.begin(), log_w_.end());
        // Sum symmetric halves pairwise so both tails contribute identically.
        double z = 0.0;
        for (std::size_t k = 0; 2 * k < M; ++k) z += 2.0 * std::exp(log_w_[k] - mx);
        if (M % 2 == 0) z += std::exp(log_w_[M / 2] - mx);
        log_z_ = mx + std::log(z);
        p_.resize(M + 1);
        for (std::size_t k = 0; 2 * k <= M; ++k) {
            const double pk = std::exp(log_w_[k] - log_z_);
            p_[k] = pk;
            p_[M - k] = pk;
        }
        // Law of |S| for sampling: cumulative over k = M, M-1, ..., ceil(M/2).
        half_cdf_.clear();
        double acc = 0.0;
        for (std::size_t k = M; 2 * k >= M; --k) {
            acc += (2 * k == M) ? p_[k] : 2.0 * p_[k];
            half_cdf_.push_back(acc);
            if (k == 0) break;
        }
    }

    const CWParams& params() const noexcept { return params_; }
    std::size_t M() const noexcept { return params_.M; }

    /// Probability of exactly k up-spins.
    double prob_up(std::size_t k) const { return p_.at(k); }
    /// Probability of total spin s; zero when s has the wrong parity.
    double prob_spin(long s) const
    {
        const auto M = static_cast<long>(params_.M);
        if (s < -M || s > M || (s + M) % 2 != 0) return 0.0;
        return p_[static_cast<std::size_t>((s + M) / 2)];
    }
    std::span<const double> probabilities() const noexcept { return p_; }
    std::span<const double> log_weights() const noexcept { return log_w_; }
    /// log of the partition function of the unnormalized weights over S
    /// (binomial multiplicity included).
    double log_normalizer() const noexcept { return log_z_; }

    /// Draw the total spin S.
    long sample_total(RngStream& stream) const
    {
        const double u = stream.uniform() * half_cdf_.back();
        const auto it = std::upper_bound(half_cdf_.begin(), half_cdf_.end(), u);
        const std::size_t idx = std::min<std::size_t>(it - half_cdf_.begin(), half_cdf_.size() - 1);
        const auto M = static_cast<long>(params_.M);
        const long k = M - static_cast<long>(idx);
        const long s = 2 * k - M;
        if (s == 0) return 0;
        return stream.coin() ? s : -s;
    }

  private:
    CWParams params_{};
    std::vector<double> log_w_;
    std::vector<double> p_;
    std::vector<double> half_cdf_;
    double log_z_ = 0.0;
};

inline MagnetizationPMF magnetization_pmf(const CWParams& params)
{
    return MagnetizationPMF(params);
}

/// Exact draw from the Curie-Weiss law, delivered position by position:
/// `sink(i, spin)` is called for i = 0, ..., M-1 in order.  The total spin is
/// drawn first, then the up-spins are placed by selection sampling.
template <class Sink>
void sample_cw_into(const MagnetizationPMF& pmf, RngStream& stream, Sink&& sink)
{
    const std::size_t M = pmf.M();
    const long s = pmf.sample_total(stream);
    std::size_t ups = static_cast<std::size_t>((static_cast<long>(M) + s) / 2);
    for (std::size_t i = 0; i < M; ++i) {
        const std::size_t left = M - i;
        const bool up = ups > 0 && (ups == left || stream.below(left) < ups);
        if (up) --ups;
        sink(i, up ? 1.0 : -1.0);
    }
}

inline std::vector<double> sample_cw(const MagnetizationPMF& pmf, RngStream& stream)
{
    std::vector<double> x(pmf.M());
    sample_cw_into(pmf, stream, [&](std::size_t i, double v) { x[i] = v; });
    return x;
}

inline std::vector<double> sample_cw(const CWParams& params, RngStream& stream)
{
    return sample_cw(magnetization_pmf(params), stream);
}

/// Unnormalized log-weight beta S^2 / (2M) of a spin configuration.
inline double cw_log_weight(double beta, std::span<const double> spins)
{
    double s = 0.0;
    for (double x : spins) s += x;
    return beta * s * s / (2.0 * static_cast<double>(spins.size()));
}

//---------------------------------------------------------------------------//
namespace detail {

/// E[x_1 ... x_ell | k of the M spins are up], configuration uniform.
inline long double conditional_product_moment(std::size_t M, std::size_t k, std::size_t ell)
{
    long double total = 0.0L;
    long double binom = 1.0L;  // C(ell, j)
    for (std::size_t j = 0; j <= ell; ++j) {
        if (j > 0) binom = binom * static_cast<long double>(ell - j + 1) / static_cast<long double>(j);
        if (j > k || ell - j > M - k) continue;
        long double term = binom;
        for (std::size_t a = 0; a < j; ++a) term *= static_cast<long double>(k - a);
        for (std::size_t a = 0; a < ell - j; ++a) term *= static_cast<long double>(M - k - a);
        total += ((ell - j) % 2 == 0) ? term : -term;
    }
    long double denom = 1.0L;
    for (std::size_t a = 0; a < ell; ++a) denom *= static_cast<long double>(M - a);
    return total / denom;
}

}  // namespace detail

/// Exact E(x_1 ... x_ell) under the Curie-Weiss law, from the total-spin
/// distribution and the hypergeometric conditional moment.
inline double exact_joint_moment(const MagnetizationPMF& pmf, std::size_t ell)
{
    const std::size_t M = pmf.M();
    if (ell > M) throw DomainError("exact_joint_moment: ell exceeds the number of spins");
    if (ell % 2 == 1) return 0.0;
    if (ell == 0) return 1.0;
    long double sum = 0.0L;
    // Even ell: the conditional moment is symmetric under k -> M - k.
    for (std::size_t k = 0; 2 * k <= M; ++k) {
        const long double g = detail::conditional_product_moment(M, k, ell);
        const long double weight = (2 * k == M) ? pmf.prob_up(k) : 2.0L * pmf.prob_up(k);
        sum += weight * g;
    }
    return static_cast<double>(sum);
}

inline double exact_joint_moment(const CWParams& params, std::size_t ell)
{
    if (ell > params.M) throw DomainError("exact_joint_moment: ell exceeds the number of spins");
    return exact_joint_moment(magnetization_pmf(params), ell);
}

//---------------------------------------------------------------------------//
/*!
 * Mixing weight of the de Finetti (Hubbard-Stratonovich) representation:
 * F(t) = (1/beta) artanh(t)^2 + ln(1 - t^2), w(t) = exp(-M F(t) / 2) / (1 - t^2).
 */
struct TiltWeight {
    double beta = 1.0;
    std::size_t M = 1;

    double F(double t) const
    {
        const double a = std::atanh(t);
        return a * a / beta + std::log1p(-t * t);
    }
    double weight(double t) const
    {
        return std::exp(-0.5 * static_cast<double>(M) * F(t)) / (1.0 - t * t);
    }
    /// log of w(tanh u) (1 - tanh^2 u), the integrand after t = tanh(u).
    double log_weight_u(double u) const
    {
        const double au = std::abs(u);
        const double log_cosh = au + std::log1p(std::exp(-2.0 * au)) - std::log(2.0);
        return -static_cast<double>(M) * (u * u / (2.0 * beta) - log_cosh);
    }
};

/// E(x_1 ... x_ell) through the mixture representation, as the ratio
/// int t^ell w(t) dt / int w(t) dt, integrated in u = artanh(t).
inline double hs_joint_moment(const CWParams& params, std::size_t ell)
{
    params.validate();
    if (!(params.beta > 0.0)) throw DomainError("hs_joint_moment requires beta > 0");
    if (ell % 2 == 1) return 0.0;
    if (ell == 0) return 1.0;
    const TiltWeight w{params.beta, params.M};
    const double peak = params.beta * solve_m(params.beta);
    const double g_max = w.log_weight_u(peak);
    // Walk right until the integrand is negligible relative to the peak.
    double width = std::sqrt(params.beta / static_cast<double>(params.M)) + 1e-3;
    double upper = peak + width;
    while (w.log_weight_u(upper) - g_max > -120.0) {
        width *= 1.5;
        upper = peak + width;
    }
    std::vector<double> breaks;
    if (peak > 0.0) {
        for (int i = 0; i <= 8; ++i) breaks.push_back(peak * i / 8.0);
        for (int i = 1; i <= 8; ++i) breaks.push_back(peak + (upper - peak) * i / 8.0);
    } else {
        for (int i = 0; i <= 16; ++i) breaks.push_back(upper * i / 16.0);
    }
    const auto e = static_cast<int>(ell);
    const auto num = quad::integrate(
        [&](double u) { return std::pow(std::tanh(u), e) * std::exp(w.log_weight_u(u) - g_max); },
        breaks, 1e-300, 1e-13);
    const auto den = quad::integrate(
        [&](double u) { return std::exp(w.log_weight_u(u) - g_max); }, breaks, 1e-300, 1e-13);
    return num.value / den.value;
}

/// Large-M behavior of E(x_1 ... x_ell): (ell-1)!! (beta/(1-beta))^{ell/2}
/// M^{-ell/2} for beta < 1 and m(beta)^ell for beta > 1.  beta = 1 is
/// rejected because its constant is not known in closed form.
inline double asymptotic_joint_moment(double beta, std::size_t M, std::size_t ell)
{
    if (!(beta >= 0.0)) throw DomainError("asymptotic_joint_moment: beta must be >= 0");
    if (beta == 1.0) throw DomainError("asymptotic_joint_moment: beta = 1 is not supported");
    if (ell % 2 == 1) return 0.0;
    const double half = static_cast<double>(ell) / 2.0;
    if (beta < 1.0) {
        return static_cast<double>(double_factorial(static_cast<int>(ell) - 1)) *
               std::pow(beta / (1.0 - beta), half) * std::pow(static_cast<double>(M), -half);
    }
    return std::pow(solve_m(beta), static_cast<double>(ell));
}

}  // namespace rmtlab
