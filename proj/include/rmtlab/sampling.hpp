// SPDX-License-Identifier: Apache-2.0
//
// Deterministic, splittable random streams and the scalar / process
// samplers every ensemble generator draws from.
//
// A stream is identified by a 64-bit seed plus a path of (label, integer)
// pairs, e.g. {("ensemble", 0), ("N", 1024), ("replica", 7)}.  The identity
// is hashed into a Philox4x32-10 key and the upper half of its counter; the
// lower half of the counter is the draw position.  No state is shared
// between streams, so distinct paths can be consumed on different threads.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "rmtlab/errors.hpp"

namespace rmtlab {

using LabelPath = std::vector<std::pair<std::string, std::uint64_t>>;

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
inline constexpr std::array<std::uint32_t, 4>
philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept
{
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Counter-based random stream.
 *
 * Value type: copying a stream copies its position, so a copy replays the
 * same numbers.  Satisfies UniformRandomBitGenerator.  A single stream must
 * not be advanced from two threads at once.
 */
class RngStream {
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, LabelPath path) : seed_(seed), path_(std::move(path))
    {
        std::uint64_t a = detail::splitmix64(seed ^ 0x5851f42d4c957f2dull);
        std::uint64_t b = detail::splitmix64(seed ^ 0x14057b7ef767814full);
        for (const auto& [label, n] : path_) {
            const std::uint64_t hl = detail::fnv1a(label);
            a = detail::splitmix64(detail::splitmix64(a ^ hl) ^ n);
            b = detail::splitmix64(detail::splitmix64(b + hl) + (n ^ 0xd1b54a32d192ed03ull));
        }
        key_ = {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
        ctr_hi_ = b;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    std::uint64_t seed() const noexcept { return seed_; }
    const LabelPath& label_path() const noexcept { return path_; }
    /// Number of 64-bit words consumed so far.
    std::uint64_t position() const noexcept { return 2 * block_ - buffered_; }

    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept
    {
        if (buffered_ == 0) {
            const auto out = detail::philox4x32_10(
                {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                 static_cast<std::uint32_t>(ctr_hi_), static_cast<std::uint32_t>(ctr_hi_ >> 32)},
                key_);
            buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
            buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
            ++block_;
            buffered_ = 2;
        }
        return buffer_[2 - buffered_--];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1); safe as an argument to log.
    double uniform_open() noexcept
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n) by Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool coin() noexcept { return (next_u64() >> 63) != 0; }

    /// Pair of independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() noexcept
    {
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        const double phi = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Fresh stream whose path extends this one's by (label, n).
    RngStream child(std::string_view label, std::uint64_t n) const
    {
        LabelPath p = path_;
        p.emplace_back(std::string(label), n);
        return RngStream(seed_, std::move(p));
    }

  private:
    std::uint64_t seed_;
    LabelPath path_;
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t ctr_hi_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

inline RngStream derive_stream(std::uint64_t seed, LabelPath path = {})
{
    return RngStream(seed, std::move(path));
}

//---------------------------------------------------------------------------//
// Scalar entry laws
//---------------------------------------------------------------------------//
struct Rademacher {};
struct StdGaussian {};
/// Law on {-1, +1} with P(+1) = (1 + t) / 2.
struct TwoPoint {
    double t = 0.0;
};
/// Atom of a mixing measure over TwoPoint laws.
struct SpinAtom {
    double weight = 1.0;
    double tau = 0.0;
};

class ScalarDist {
  public:
    using Variant = std::variant<Rademacher, StdGaussian, TwoPoint>;

    ScalarDist() = default;
    ScalarDist(Variant v) : v_(v)  // NOLINT(google-explicit-constructor)
    {
        if (const auto* tp = std::get_if<TwoPoint>(&v_); tp && !(std::abs(tp->t) <= 1.0)) {
            throw ConfigError("two-point bias t must lie in [-1, 1]");
        }
    }

    static ScalarDist rademacher() { return {Rademacher{}}; }
    static ScalarDist gaussian() { return {StdGaussian{}}; }
    static ScalarDist two_point(double t) { return {TwoPoint{t}}; }

    const Variant& variant() const noexcept { return v_; }
    bool is_spin() const noexcept { return !std::holds_alternative<StdGaussian>(v_); }

    double mean() const noexcept { return moment(1); }
    double variance() const noexcept
    {
        const double m = mean();
        return moment(2) - m * m;
    }

    /// k-th raw moment E[X^k].
    double moment(int k) const noexcept
    {
        if (k == 0) return 1.0;
        if (std::holds_alternative<StdGaussian>(v_)) {
            if (k % 2 != 0) return 0.0;
            double df = 1.0;
            for (int j = k - 1; j > 1; j -= 2) df *= j;
            return df;
        }
        if (k % 2 == 0) return 1.0;
        if (const auto* tp = std::get_if<TwoPoint>(&v_)) return tp->t;
        return 0.0;
    }

    std::string name() const
    {
        if (std::holds_alternative<Rademacher>(v_)) return "rademacher";
        if (std::holds_alternative<StdGaussian>(v_)) return "gaussian";
        return "two_point:" + std::to_string(std::get<TwoPoint>(v_).t);
    }

    friend bool operator==(const ScalarDist& a, const ScalarDist& b)
    {
        if (a.v_.index() != b.v_.index()) return false;
        if (const auto* ta = std::get_if<TwoPoint>(&a.v_)) {
            return ta->t == std::get<TwoPoint>(b.v_).t;
        }
        return true;
    }

  private:
    Variant v_ = Rademacher{};
};

/// Fill `out` with i.i.d. draws from `dist`.
inline void fill_iid(const ScalarDist& dist, std::span<double> out, RngStream& stream)
{
    std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, Rademacher>) {
                for (double& x : out) x = stream.coin() ? 1.0 : -1.0;
            } else if constexpr (std::is_same_v<D, StdGaussian>) {
                std::size_t i = 0;
                for (; i + 1 < out.size(); i += 2) {
                    std::tie(out[i], out[i + 1]) = stream.normal_pair();
                }
                if (i < out.size()) out[i] = stream.normal_pair().first;
            } else {
                const double p_up = 0.5 * (1.0 + d.t);
                for (double& x : out) x = stream.uniform() < p_up ? 1.0 : -1.0;
            }
        },
        dist.variant());
}

inline std::vector<double> sample_iid(const ScalarDist& dist, std::size_t n, RngStream& stream)
{
    std::vector<double> out(n);
    fill_iid(dist, out, stream);
    return out;
}

//---------------------------------------------------------------------------//
// Stationary processes
//---------------------------------------------------------------------------//
struct IidProcess {
    ScalarDist dist;
};
/// Symmetric two-state chain on {-1, +1}; flips sign with probability q.
struct MarkovTwoState {
    double q = 0.5;
};
/// Stationary Gaussian AR(1) with unit variance.
struct GaussAR1 {
    double rho = 0.0;
};
/// Y_n = Y_1 for all n; generates random Toeplitz matrices.
struct ConstantProcess {
    ScalarDist dist;
};

using ProcessSpec = std::variant<IidProcess, MarkovTwoState, GaussAR1, ConstantProcess>;

inline void validate(const ProcessSpec& spec)
{
    if (const auto* m = std::get_if<MarkovTwoState>(&spec); m && !(m->q > 0.0 && m->q < 1.0)) {
        throw ConfigError("two-state chain flip probability must lie in (0, 1)");
    }
    if (const auto* a = std::get_if<GaussAR1>(&spec); a && !(std::abs(a->rho) < 1.0)) {
        throw ConfigError("AR(1) coefficient must satisfy |rho| < 1");
    }
}

/// Fill `out` with a stationary path of the process.
inline void fill_process(const ProcessSpec& spec, std::span<double> out, RngStream& stream)
{
    validate(spec);
    if (out.empty()) return;
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, IidProcess>) {
                fill_iid(p.dist, out, stream);
            } else if constexpr (std::is_same_v<P, MarkovTwoState>) {
                double y = stream.coin() ? 1.0 : -1.0;
                out[0] = y;
                for (std::size_t i = 1; i < out.size(); ++i) {
                    if (stream.uniform() < p.q) y = -y;
                    out[i] = y;
                }
            } else if constexpr (std::is_same_v<P, GaussAR1>) {
                // Innovations first, then the recursion in place.
                fill_iid(ScalarDist::gaussian(), out, stream);
                const double s = std::sqrt(1.0 - p.rho * p.rho);
                for (std::size_t i = 1; i < out.size(); ++i) {
                    out[i] = p.rho * out[i - 1] + s * out[i];
                }
            } else {
                double first = 0.0;
                fill_iid(p.dist, std::span<double>(&first, 1), stream);
                std::fill(out.begin(), out.end(), first);
            }
        },
        spec);
}

inline std::vector<double> sample_process(const ProcessSpec& spec, std::size_t n, RngStream& stream)
{
    std::vector<double> out(n);
    fill_process(spec, out, stream);
    return out;
}

inline std::string process_name(const ProcessSpec& spec)
{
    return std::visit(
        [](const auto& p) -> std::string {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, IidProcess>) return "iid:" + p.dist.name();
            else if constexpr (std::is_same_v<P, MarkovTwoState>) return "markov:" + std::to_string(p.q);
            else if constexpr (std::is_same_v<P, GaussAR1>) return "ar1:" + std::to_string(p.rho);
            else return "constant:" + p.dist.name();
        },
        spec);
}

}  // namespace rmtlab
