// SPDX-License-Identifier: Apache-2.0
//
// Random symmetric matrix ensembles, their normalizations, and the
// structural helpers they are built from (wrap-around distance, step
// profiles, fillings, sparse dependence counts).
//
// All indices are 0-based.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rmtlab/curie_weiss.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/sampling.hpp"
#include "rmtlab/sym_matrix.hpp"

namespace rmtlab {

/// Distance of i and j on Z/NZ.
inline std::size_t wrap_dist(std::size_t i, std::size_t j, std::size_t N)
{
    if (i >= N || j >= N) throw DomainError("wrap_dist: index out of range");
    const std::size_t d = i > j ? i - j : j - i;
    return std::min(d, N - d);
}

//---------------------------------------------------------------------------//
// Bandwidth rules
//---------------------------------------------------------------------------//
struct FixedBandwidth {
    std::size_t b = 0;
};
/// b_N = ceil(C N^gamma)
struct PowerBandwidth {
    double C = 1.0;
    double gamma = 0.5;
};
/// b_N = ceil(c N)
struct LinearBandwidth {
    double c = 0.125;
};
using BandwidthRule = std::variant<FixedBandwidth, PowerBandwidth, LinearBandwidth>;

/// Half-width b_N for dimension N; requires 2 b_N + 1 <= N.
inline std::size_t resolve_bandwidth(const BandwidthRule& rule, std::size_t N)
{
    const auto n = static_cast<double>(N);
    const std::size_t b = std::visit(
        [&](const auto& r) -> std::size_t {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, FixedBandwidth>) {
                return r.b;
            } else if constexpr (std::is_same_v<R, PowerBandwidth>) {
                if (!(r.C > 0.0) || !(r.gamma > 0.0)) throw ConfigError("power bandwidth needs C, gamma > 0");
                // Guard against ceil(64.0000000001) style rounding.
                return static_cast<std::size_t>(std::ceil(r.C * std::pow(n, r.gamma) - 1e-9));
            } else {
                if (!(r.c > 0.0)) throw ConfigError("linear bandwidth needs c > 0");
                return static_cast<std::size_t>(std::ceil(r.c * n - 1e-9));
            }
        },
        rule);
    if (2 * b + 1 > N) {
        throw ConfigError("band width 2b+1 = " + std::to_string(2 * b + 1) + " exceeds N = " +
                          std::to_string(N));
    }
    return b;
}

//---------------------------------------------------------------------------//
/*!
 * Step function alpha on [0, 1]: value values[k] on [breaks[k], breaks[k+1]),
 * the last piece closed at 1.
 */
class Profile {
  public:
    Profile() = default;
    Profile(std::vector<double> breaks, std::vector<double> values)
        : breaks_(std::move(breaks)), values_(std::move(values))
    {
        if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size()) {
            throw ConfigError("profile needs n+1 breakpoints for n values");
        }
        if (breaks_.front() != 0.0 || breaks_.back() != 1.0) {
            throw ConfigError("profile breakpoints must start at 0 and end at 1");
        }
        for (std::size_t i = 1; i < breaks_.size(); ++i) {
            if (!(breaks_[i] > breaks_[i - 1])) throw ConfigError("profile breakpoints must increase");
        }
    }

    static Profile constant(double v) { return Profile({0.0, 1.0}, {v}); }
    /// Indicator of [0, c]: non-periodic band of relative half-width c.
    static Profile band(double c) { return Profile({0.0, c, 1.0}, {1.0, 0.0}); }
    /// Indicator of [0, c] u [1 - c, 1]: periodic band.
    static Profile periodic_band(double c)
    {
        if (!(c > 0.0 && c < 0.5)) throw ConfigError("periodic profile needs c in (0, 1/2)");
        return Profile({0.0, c, 1.0 - c, 1.0}, {1.0, 0.0, 1.0});
    }

    const std::vector<double>& breaks() const noexcept { return breaks_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double operator()(double x) const noexcept
    {
        const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
        auto k = static_cast<std::size_t>(it - breaks_.begin());
        k = k == 0 ? 0 : k - 1;
        return values_[std::min(k, values_.size() - 1)];
    }

    friend bool operator==(const Profile&, const Profile&) = default;

  private:
    std::vector<double> breaks_{0.0, 1.0};
    std::vector<double> values_{1.0};
};

/// Phi = int_0^1 int_0^1 alpha^2(|x - y|) dx dy, exact for step profiles.
/// |x - y| has density 2(1 - d) on [0, 1], so each piece contributes
/// v^2 [2d - d^2] over its interval.
inline double phi(const Profile& profile)
{
    const auto& br = profile.breaks();
    const auto& v = profile.values();
    const auto antideriv = [](double d) { return 2.0 * d - d * d; };
    double total = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        total += v[k] * v[k] * (antideriv(br[k + 1]) - antideriv(br[k]));
    }
    if (!(total > 0.0)) throw DomainError("phi: profile is identically zero");
    return total;
}

//---------------------------------------------------------------------------//
// Fillings
//---------------------------------------------------------------------------//
enum class FillingOrder { Diagonal, RowByRow };

struct Cell {
    std::size_t row = 0;
    std::size_t col = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Bijection n -> (i <= j) from {0, ..., N(N+1)/2 - 1} onto the upper
/// triangle.  Diagonal: main diagonal first, then each superdiagonal outward.
/// RowByRow: row 0 from the diagonal to the right, then row 1, and so on.
inline std::vector<Cell> filling_map(std::size_t N, FillingOrder order)
{
    std::vector<Cell> cells;
    cells.reserve(N * (N + 1) / 2);
    if (order == FillingOrder::Diagonal) {
        for (std::size_t l = 0; l < N; ++l) {
            for (std::size_t i = 0; i + l < N; ++i) cells.push_back({i, i + l});
        }
    } else {
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = i; j < N; ++j) cells.push_back({i, j});
        }
    }
    return cells;
}

//---------------------------------------------------------------------------//
// Ensemble descriptions
//---------------------------------------------------------------------------//
struct Wigner {
    ScalarDist dist;
};
struct BandWigner {
    ScalarDist dist;
    BandwidthRule rule = LinearBandwidth{0.125};
    bool periodic = false;
};
/// X(i, j) = alpha(|i - j| / N) * Wigner(i, j)
struct ProfileBand {
    ScalarDist dist;
    Profile profile;
};
enum class BlockPattern {
    Antisymmetric,  // [[A, B], [B, -A]]
    Symmetric,      // [[A, B], [B, A]]
};
struct SparseBlock {
    BlockPattern pattern = BlockPattern::Symmetric;
    ScalarDist dist;
};
/// X(i, i + l) = Y^{(l)}_i with an independent path of the process per diagonal.
struct DiagonalProcess {
    ProcessSpec process;
};
/// X(i, i + l) = xi^{(l)}_i with an independent Curie-Weiss vector per diagonal.
struct DiagonalCW {
    double beta = 0.0;
};
/// One path of length N(N+1)/2 placed on the upper triangle by a filling.
struct FilledProcess {
    ProcessSpec process;
    FillingOrder order = FillingOrder::Diagonal;
};
/// One Curie-Weiss draw of N^2 spins; the upper triangle is kept.
struct FullCW {
    double beta = 0.0;
};
/// tau drawn once per matrix from the atoms, then i.i.d. TwoPoint(tau) entries.
struct ExchangeableSpin {
    std::vector<SpinAtom> atoms;
};
/// The all-ones matrix.
struct RankOneE {};

using EnsembleSpec = std::variant<Wigner, BandWigner, ProfileBand, SparseBlock, DiagonalProcess,
                                  DiagonalCW, FilledProcess, FullCW, ExchangeableSpin, RankOneE>;

inline void validate(const EnsembleSpec& spec, std::size_t N)
{
    if (N == 0) throw ConfigError("matrix dimension must be positive");
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, BandWigner>) {
                (void)resolve_bandwidth(s.rule, N);
            } else if constexpr (std::is_same_v<S, ProfileBand>) {
                (void)phi(s.profile);
            } else if constexpr (std::is_same_v<S, SparseBlock>) {
                if (N % 2 != 0) throw ConfigError("sparse block ensembles need even N");
            } else if constexpr (std::is_same_v<S, DiagonalProcess> || std::is_same_v<S, FilledProcess>) {
                rmtlab::validate(s.process);
            } else if constexpr (std::is_same_v<S, DiagonalCW> || std::is_same_v<S, FullCW>) {
                CWParams{s.beta, 1}.validate();
            } else if constexpr (std::is_same_v<S, ExchangeableSpin>) {
                if (s.atoms.empty()) throw ConfigError("exchangeable ensemble needs atoms");
                double w = 0.0;
                for (const auto& a : s.atoms) {
                    if (!(a.weight > 0.0)) throw ConfigError("mixture weights must be positive");
                    if (!(std::abs(a.tau) <= 1.0)) throw ConfigError("tau must lie in [-1, 1]");
                    w += a.weight;
                }
                if (std::abs(w - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
            }
        },
        spec);
}

inline std::string ensemble_kind(const EnsembleSpec& spec)
{
    static constexpr const char* names[] = {
        "wigner",        "band",      "profile",        "sparse_block", "diagonal_process",
        "diagonal_cw",   "filled_process", "full_cw",   "exchangeable_spin", "rank_one"};
    return names[spec.index()];
}

//---------------------------------------------------------------------------//
// Construction
//---------------------------------------------------------------------------//
namespace detail {

inline void fill_upper_iid(SymMatrix& m, const ScalarDist& dist, RngStream& stream)
{
    const std::size_t n = m.size();
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<double> tail(row.data(), n - i);
        fill_iid(dist, tail, stream);
        for (std::size_t j = i; j < n; ++j) m.set(i, j, tail[j - i]);
    }
}

inline double draw_tau(const std::vector<SpinAtom>& atoms, RngStream& stream)
{
    const double u = stream.uniform();
    double acc = 0.0;
    for (const auto& a : atoms) {
        acc += a.weight;
        if (u < acc) return a.tau;
    }
    return atoms.back().tau;
}

}  // namespace detail

struct ExchangeableDraw {
    double tau = 0.0;
    SymMatrix matrix;
};

inline ExchangeableDraw sample_exchangeable(const ExchangeableSpin& spec, std::size_t N, RngStream& stream)
{
    validate(EnsembleSpec{spec}, N);
    ExchangeableDraw out{detail::draw_tau(spec.atoms, stream), SymMatrix(N)};
    detail::fill_upper_iid(out.matrix, ScalarDist::two_point(out.tau), stream);
    return out;
}

/// Sample one N x N matrix of the ensemble.  Pure in (spec, N, stream state).
inline SymMatrix build(const EnsembleSpec& spec, std::size_t N, RngStream& stream)
{
    validate(spec, N);
    return std::visit(
        [&](const auto& s) -> SymMatrix {
            using S = std::decay_t<decltype(s)>;
            SymMatrix m(N);
            if constexpr (std::is_same_v<S, Wigner>) {
                detail::fill_upper_iid(m, s.dist, stream);
            } else if constexpr (std::is_same_v<S, BandWigner>) {
                const std::size_t b = resolve_bandwidth(s.rule, N);
                std::vector<Cell> live;
                for (std::size_t i = 0; i < N; ++i) {
                    for (std::size_t j = i; j < N; ++j) {
                        const std::size_t d = s.periodic ? wrap_dist(i, j, N) : j - i;
                        if (d <= b) live.push_back({i, j});
                    }
                }
                const auto x = sample_iid(s.dist, live.size(), stream);
                for (std::size_t t = 0; t < live.size(); ++t) m.set(live[t].row, live[t].col, x[t]);
            } else if constexpr (std::is_same_v<S, ProfileBand>) {
                detail::fill_upper_iid(m, s.dist, stream);
                const auto n = static_cast<double>(N);
                for (std::size_t i = 0; i < N; ++i) {
                    for (std::size_t j = i; j < N; ++j) {
                        m.set(i, j, s.profile(static_cast<double>(j - i) / n) * m(i, j));
                    }
                }
            } else if constexpr (std::is_same_v<S, SparseBlock>) {
                const std::size_t h = N / 2;
                SymMatrix a(h);
                SymMatrix b(h);
                detail::fill_upper_iid(a, s.dist, stream);
                detail::fill_upper_iid(b, s.dist, stream);
                const double sign = s.pattern == BlockPattern::Antisymmetric ? -1.0 : 1.0;
                for (std::size_t i = 0; i < h; ++i) {
                    for (std::size_t j = i; j < h; ++j) {
                        m.set(i, j, a(i, j));
                        m.set(i + h, j + h, sign * a(i, j));
                    }
                    for (std::size_t j = 0; j < h; ++j) m.set(i, j + h, b(i, j));
                }
            } else if constexpr (std::is_same_v<S, DiagonalProcess>) {
                std::vector<double> path;
                for (std::size_t l = 0; l < N; ++l) {
                    auto diag = stream.child("diagonal", l);
                    path.resize(N - l);
                    fill_process(s.process, path, diag);
                    for (std::size_t i = 0; i + l < N; ++i) m.set(i, i + l, path[i]);
                }
            } else if constexpr (std::is_same_v<S, DiagonalCW>) {
                const auto pmf = magnetization_pmf({s.beta, N});
                for (std::size_t l = 0; l < N; ++l) {
                    auto diag = stream.child("diagonal", l);
                    sample_cw_into(pmf, diag, [&](std::size_t i, double x) {
                        if (i + l < N) m.set(i, i + l, x);
                    });
                }
            } else if constexpr (std::is_same_v<S, FilledProcess>) {
                const auto cells = filling_map(N, s.order);
                const auto path = sample_process(s.process, cells.size(), stream);
                for (std::size_t t = 0; t < cells.size(); ++t) m.set(cells[t].row, cells[t].col, path[t]);
            } else if constexpr (std::is_same_v<S, FullCW>) {
                const auto pmf = magnetization_pmf({s.beta, N * N});
                sample_cw_into(pmf, stream, [&](std::size_t p, double x) {
                    const std::size_t i = p / N;
                    const std::size_t j = p % N;
                    if (i <= j) m.set(i, j, x);
                });
            } else if constexpr (std::is_same_v<S, ExchangeableSpin>) {
                m = sample_exchangeable(s, N, stream).matrix;
            } else {
                m = SymMatrix(N, 1.0);
            }
            return m;
        },
        spec);
}

/// Scale that makes the spectrum O(1): 1/sqrt(2 b_N + 1) for band matrices,
/// 1/sqrt(Phi N) for profile matrices, 1/sqrt(N) for everything else.
inline double norm_factor(const EnsembleSpec& spec, std::size_t N)
{
    if (const auto* b = std::get_if<BandWigner>(&spec)) {
        return 1.0 / std::sqrt(static_cast<double>(2 * resolve_bandwidth(b->rule, N) + 1));
    }
    if (const auto* p = std::get_if<ProfileBand>(&spec)) {
        return 1.0 / std::sqrt(phi(p->profile) * static_cast<double>(N));
    }
    return 1.0 / std::sqrt(static_cast<double>(N));
}

//---------------------------------------------------------------------------//
/*!
 * The three counts of a sparse dependence relation for the block patterns
 * at total dimension N = 2N'.  Two ordered positions are related when they
 * hold the same underlying random variable (up to sign).
 *
 *  - max_row_related:   max_i |{(j, k, l) : (i, j) ~ (k, l)}|
 *  - chained:           |{(i, j, l) : (i, j) ~ (j, l), l != i}|
 *  - max_class_bound:   max_{i,j,k} |{l : (i, j) ~ (k, l)}|
 */
struct SparseCounts {
    std::uint64_t max_row_related = 0;
    std::uint64_t chained = 0;
    std::uint64_t max_class_bound = 0;
};

inline SparseCounts verify_sparse_counts(BlockPattern /*pattern*/, std::size_t N)
{
    // The sign flip in the antisymmetric pattern does not change which
    // positions share a variable, so both patterns induce the same relation.
    if (N % 2 != 0 || N == 0) throw ConfigError("sparse block patterns need even N");
    const std::size_t h = N / 2;
    auto var_id = [h](std::size_t i, std::size_t j) {
        const bool top_i = i < h;
        const bool top_j = j < h;
        std::size_t a = i % h;
        std::size_t b = j % h;
        if (a > b) std::swap(a, b);
        const std::size_t local = a * h + b;
        return top_i == top_j ? local : h * h + local;  // A-block or B-block variable
    };
    std::vector<std::vector<Cell>> members(2 * h * h);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) members[var_id(i, j)].push_back({i, j});
    }
    SparseCounts out;
    for (std::size_t i = 0; i < N; ++i) {
        std::uint64_t row = 0;
        for (std::size_t j = 0; j < N; ++j) row += members[var_id(i, j)].size();
        out.max_row_related = std::max(out.max_row_related, row);
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            for (const Cell& c : members[var_id(i, j)]) {
                if (c.row == j && c.col != i) ++out.chained;
            }
        }
    }
    for (const auto& cls : members) {
        std::vector<std::uint64_t> per_row(N, 0);
        for (const Cell& c : cls) {
            out.max_class_bound = std::max(out.max_class_bound, ++per_row[c.row]);
        }
    }
    return out;
}

}  // namespace rmtlab
