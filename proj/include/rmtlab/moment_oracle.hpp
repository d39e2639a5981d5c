// SPDX-License-Identifier: Apache-2.0
//
// Exact combinatorics of the trace-moment method.
//
// A tuple (i_1, ..., i_k) of row indices defines the closed walk
// i_1 -> i_2 -> ... -> i_k -> i_1 and hence a multigraph whose edges are the
// unordered pairs {i_a, i_{a+1}} (loops {i, i} included).  The expected
// product E[X(i_1,i_2) ... X(i_k,i_1)] only depends on that multigraph, and
// summing it over all N^k tuples gives E tr X^k exactly.
//
// Indices are 0-based throughout.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rmtlab/combinatorics.hpp"
#include "rmtlab/curie_weiss.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/sampling.hpp"

namespace rmtlab {

inline constexpr std::size_t kMaxWalkLength = 16;
inline constexpr std::uint64_t kEnumerationCap = 100'000'000;

using Index = std::uint32_t;

struct Edge {
    Index u = 0;  // u <= v
    Index v = 0;
    unsigned mult = 0;
};

/// Multigraph of a closed walk.  Fixed capacity, no allocation.
class EdgeMultiset {
  public:
    explicit EdgeMultiset(std::span<const Index> tuple)
    {
        const std::size_t k = tuple.size();
        if (k == 0 || k > kMaxWalkLength) throw DomainError("walk length must be in [1, 16]");
        std::array<std::pair<Index, Index>, kMaxWalkLength> raw{};
        for (std::size_t a = 0; a < k; ++a) {
            const Index x = tuple[a];
            const Index y = tuple[(a + 1) % k];
            raw[a] = {std::min(x, y), std::max(x, y)};
        }
        std::sort(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(k));
        for (std::size_t a = 0; a < k; ++a) {
            if (n_edges_ > 0 && edges_[n_edges_ - 1].u == raw[a].first &&
                edges_[n_edges_ - 1].v == raw[a].second) {
                ++edges_[n_edges_ - 1].mult;
            } else {
                edges_[n_edges_++] = {raw[a].first, raw[a].second, 1};
            }
        }
        std::array<Index, kMaxWalkLength> verts{};
        std::copy(tuple.begin(), tuple.end(), verts.begin());
        std::sort(verts.begin(), verts.begin() + static_cast<std::ptrdiff_t>(k));
        for (std::size_t a = 0; a < k; ++a) {
            if (a == 0 || verts[a] != verts[a - 1]) vertices_[n_vertices_++] = verts[a];
        }
        walk_length_ = k;
    }

    std::span<const Edge> edges() const noexcept { return {edges_.data(), n_edges_}; }
    std::span<const Index> vertices() const noexcept { return {vertices_.data(), n_vertices_}; }
    std::size_t walk_length() const noexcept { return walk_length_; }

    /// True when every vertex is reachable from the first one.
    bool connected() const noexcept
    {
        auto parent = make_forest();
        const std::size_t root = find(parent, 0);
        for (std::size_t a = 1; a < n_vertices_; ++a) {
            if (find(parent, a) != root) return false;
        }
        return true;
    }

    /// True when the underlying simple graph (loops dropped, multiplicities
    /// ignored) is a tree.
    bool simple_graph_is_tree() const noexcept
    {
        std::array<std::size_t, kMaxWalkLength> parent{};
        for (std::size_t a = 0; a < n_vertices_; ++a) parent[a] = a;
        std::size_t simple_edges = 0;
        for (std::size_t e = 0; e < n_edges_; ++e) {
            if (edges_[e].u == edges_[e].v) return false;
            ++simple_edges;
            const std::size_t a = find(parent, vertex_slot(edges_[e].u));
            const std::size_t b = find(parent, vertex_slot(edges_[e].v));
            if (a == b) return false;  // cycle
            parent[a] = b;
        }
        return simple_edges + 1 == n_vertices_;
    }

  private:
    std::size_t vertex_slot(Index x) const noexcept
    {
        return static_cast<std::size_t>(
            std::lower_bound(vertices_.begin(), vertices_.begin() + static_cast<std::ptrdiff_t>(n_vertices_), x) -
            vertices_.begin());
    }
    std::array<std::size_t, kMaxWalkLength> make_forest() const noexcept
    {
        std::array<std::size_t, kMaxWalkLength> parent{};
        for (std::size_t a = 0; a < n_vertices_; ++a) parent[a] = a;
        for (std::size_t e = 0; e < n_edges_; ++e) {
            const std::size_t a = find(parent, vertex_slot(edges_[e].u));
            const std::size_t b = find(parent, vertex_slot(edges_[e].v));
            parent[a] = b;
        }
        return parent;
    }
    static std::size_t find(std::array<std::size_t, kMaxWalkLength>& parent, std::size_t a) noexcept
    {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }

    std::array<Edge, kMaxWalkLength> edges_{};
    std::array<Index, kMaxWalkLength> vertices_{};
    std::size_t n_edges_ = 0;
    std::size_t n_vertices_ = 0;
    std::size_t walk_length_ = 0;
};

struct TupleClass {
    std::size_t r = 0;          // distinct vertices
    std::size_t singles = 0;    // edges of multiplicity 1
    std::size_t odd_edges = 0;  // edges of odd multiplicity
    bool all_double = false;    // every edge has multiplicity exactly 2
    bool in_Ik = false;         // r = 1 + k/2 and all_double
};

inline TupleClass classify(const EdgeMultiset& g)
{
    TupleClass c;
    c.r = g.vertices().size();
    c.all_double = true;
    for (const Edge& e : g.edges()) {
        if (e.mult == 1) ++c.singles;
        if (e.mult % 2 == 1) ++c.odd_edges;
        if (e.mult != 2) c.all_double = false;
    }
    const std::size_t k = g.walk_length();
    c.in_Ik = c.all_double && k % 2 == 0 && c.r == 1 + k / 2;
    return c;
}

inline TupleClass classify(std::span<const Index> tuple) { return classify(EdgeMultiset(tuple)); }

//---------------------------------------------------------------------------//
// Enumeration
//---------------------------------------------------------------------------//
namespace detail {

/// Calls visit(tuple) for every tuple in {0..N-1}^k whose consecutive pairs
/// (cyclically) satisfy live(a, b).  Tuples are grouped by leading index and
/// `begin_group(i1)` is called before each group.  Throws ResourceError once
/// more than `cap` tuples have been visited.
template <class Live, class Begin, class Visit>
void for_each_walk(std::size_t N, std::size_t k, Live&& live, Begin&& begin_group, Visit&& visit,
                   std::uint64_t cap = kEnumerationCap)
{
    if (k == 0 || k > kMaxWalkLength) throw DomainError("walk length must be in [1, 16]");
    std::array<Index, kMaxWalkLength> t{};
    std::uint64_t visited = 0;
    const std::span<const Index> view(t.data(), k);
    for (std::size_t first = 0; first < N; ++first) {
        begin_group(first);
        t[0] = static_cast<Index>(first);
        if (k == 1) {
            if (live(t[0], t[0])) {
                if (++visited > cap) throw ResourceError("tuple enumeration exceeds the cap");
                visit(view);
            }
            continue;
        }
        // Iterative DFS over positions 1..k-1.
        std::size_t pos = 1;
        std::array<std::size_t, kMaxWalkLength> next{};
        next[1] = 0;
        while (pos >= 1) {
            if (next[pos] >= N) {
                --pos;
                continue;
            }
            const auto cand = static_cast<Index>(next[pos]++);
            if (!live(t[pos - 1], cand)) continue;
            t[pos] = cand;
            if (pos + 1 == k) {
                if (!live(cand, t[0])) continue;
                if (++visited > cap) throw ResourceError("tuple enumeration exceeds the cap");
                visit(view);
            } else {
                ++pos;
                next[pos] = 0;
            }
        }
    }
}

inline bool always_live(Index, Index) noexcept { return true; }

inline void check_cap(std::size_t N, std::size_t k)
{
    long double total = std::pow(static_cast<long double>(N), static_cast<long double>(k));
    if (total > static_cast<long double>(kEnumerationCap)) {
        throw ResourceError("N^k = " + std::to_string(static_cast<double>(total)) +
                            " exceeds the enumeration cap of 1e8");
    }
}

/// Deterministic pairwise (tree) summation.
inline double pairwise_sum(std::span<const double> x)
{
    if (x.empty()) return 0.0;
    if (x.size() == 1) return x[0];
    const std::size_t h = x.size() / 2;
    return pairwise_sum(x.first(h)) + pairwise_sum(x.subspan(h));
}

}  // namespace detail

/// Number of tuples in {0..N-1}^k whose walk traverses each edge exactly
/// twice on 1 + k/2 vertices, by exhaustive enumeration.
inline std::uint64_t count_Ik(std::size_t N, std::size_t k)
{
    detail::check_cap(N, k);
    std::uint64_t count = 0;
    detail::for_each_walk(
        N, k, detail::always_live, [](std::size_t) {},
        [&](std::span<const Index> t) {
            if (classify(t).in_Ik) ++count;
        });
    return count;
}

/// C_{k/2} N (N-1) ... (N - k/2); zero for odd k.
inline std::uint64_t count_Ik_closed_form(std::size_t N, std::size_t k)
{
    if (k % 2 == 1) return 0;
    return catalan(static_cast<unsigned>(k / 2)) *
           falling_factorial(N, static_cast<unsigned>(k / 2 + 1));
}

/// Exhaustive audit of the structural facts the moment method relies on.
struct WalkAudit {
    std::uint64_t tuples = 0;
    std::uint64_t disconnected = 0;
    /// r > 1 + k/2 but no single edge.
    std::uint64_t no_single_edge_violations = 0;
    /// r >= 1 + k/2 + s (s > 0) but fewer than 2s + 2 single edges.
    std::uint64_t single_edge_bound_violations = 0;
    /// in I_k but the simple graph is not a tree on k/2 edges.
    std::uint64_t non_tree_pairings = 0;
};

inline WalkAudit audit_walks(std::size_t N, std::size_t k)
{
    detail::check_cap(N, k);
    WalkAudit audit;
    detail::for_each_walk(
        N, k, detail::always_live, [](std::size_t) {},
        [&](std::span<const Index> t) {
            const EdgeMultiset g(t);
            const TupleClass c = classify(g);
            ++audit.tuples;
            if (!g.connected()) ++audit.disconnected;
            // Compare 2r with k + 2 + 2s to stay in integers.
            const std::size_t twice_r = 2 * c.r;
            if (twice_r > k + 2 && c.singles == 0) ++audit.no_single_edge_violations;
            if (twice_r > k + 2) {
                // Strongest instance is s = r - 1 - k/2, i.e. singles >= 2r - k.
                const std::size_t two_s = twice_r - 2 - k;
                if (c.singles < two_s + 2) ++audit.single_edge_bound_violations;
            }
            if (c.in_Ik) {
                if (!g.simple_graph_is_tree() || g.edges().size() != k / 2) ++audit.non_tree_pairings;
            }
        });
    return audit;
}

//---------------------------------------------------------------------------//
// Correlation models
//---------------------------------------------------------------------------//
/// Independent centered entries with unit variance; moments[m] = E X^m.
struct IidCentered {
    std::vector<double> moments;

    static IidCentered from(const ScalarDist& d, std::size_t max_order = kMaxWalkLength)
    {
        IidCentered m;
        for (std::size_t j = 0; j <= max_order; ++j) m.moments.push_back(d.moment(static_cast<int>(j)));
        m.validate();
        return m;
    }
    void validate() const
    {
        if (moments.size() < 3 || moments[0] != 1.0 || moments[1] != 0.0 || moments[2] != 1.0) {
            throw ConfigError("IID entry law must have mean 0 and variance 1");
        }
    }
};

/// Full Curie-Weiss ensemble: all N^2 entries are one P_beta^{N^2} draw.
struct FullCWModel {
    double beta = 0.0;
};

/// Spin entries i.i.d. given tau, with tau drawn once from a finite mixture.
struct ExchangeableSpinModel {
    std::vector<SpinAtom> atoms;
};

/// Random Toeplitz: X(i, j) = Y_{|i-j|} with independent Y_d.
struct ToeplitzModel {
    std::vector<double> moments;
};

/// Band matrix with i.i.d. centered entries inside the band.
struct BandModel {
    std::vector<double> moments;
    std::size_t b = 0;
    bool periodic = false;
};

using CorrelationModel =
    std::variant<IidCentered, FullCWModel, ExchangeableSpinModel, ToeplitzModel, BandModel>;

namespace detail {

inline double moment_at(const std::vector<double>& m, std::size_t order)
{
    if (order >= m.size()) throw DomainError("moment sequence too short for this walk");
    return m[order];
}

inline bool band_live(const BandModel& b, std::size_t N, Index x, Index y)
{
    const std::size_t d = x > y ? x - y : y - x;
    const std::size_t dist = b.periodic ? std::min(d, N - d) : d;
    return dist <= b.b;
}

}  // namespace detail

/*!
 * Evaluates E[X(i_1,i_2) ... X(i_k,i_1)] for one model at a fixed N,
 * caching whatever tables the model needs (Curie-Weiss joint moments).
 */
class ProductEvaluator {
  public:
    ProductEvaluator(CorrelationModel model, std::size_t N, std::size_t max_k = kMaxWalkLength)
        : model_(std::move(model)), N_(N)
    {
        if (const auto* cw = std::get_if<FullCWModel>(&model_)) {
            const auto pmf = magnetization_pmf({cw->beta, N * N});
            for (std::size_t l = 0; l <= std::min(max_k, N * N); ++l) {
                cw_table_.push_back(exact_joint_moment(pmf, l));
            }
        }
        if (const auto* iid = std::get_if<IidCentered>(&model_)) iid->validate();
        if (const auto* ex = std::get_if<ExchangeableSpinModel>(&model_)) {
            double w = 0.0;
            for (const auto& a : ex->atoms) {
                if (!(a.weight > 0.0) || !(std::abs(a.tau) <= 1.0)) {
                    throw ConfigError("exchangeable atoms need weight > 0 and tau in [-1, 1]");
                }
                w += a.weight;
            }
            if (std::abs(w - 1.0) > 1e-12) throw ConfigError("exchangeable weights must sum to 1");
        }
    }

    std::size_t N() const noexcept { return N_; }
    const CorrelationModel& model() const noexcept { return model_; }

    bool live(Index x, Index y) const noexcept
    {
        if (const auto* b = std::get_if<BandModel>(&model_)) return detail::band_live(*b, N_, x, y);
        return true;
    }

    double operator()(const EdgeMultiset& g) const
    {
        return std::visit(
            [&](const auto& m) -> double {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, IidCentered> || std::is_same_v<M, BandModel>) {
                    double p = 1.0;
                    for (const Edge& e : g.edges()) {
                        if (!live(e.u, e.v)) return 0.0;
                        p *= detail::moment_at(m.moments, e.mult);
                        if (p == 0.0) return 0.0;
                    }
                    return p;
                } else if constexpr (std::is_same_v<M, FullCWModel>) {
                    return cw_table_.at(classify(g).odd_edges);
                } else if constexpr (std::is_same_v<M, ExchangeableSpinModel>) {
                    const auto ell = static_cast<int>(classify(g).odd_edges);
                    double s = 0.0;
                    for (const auto& a : m.atoms) s += a.weight * std::pow(a.tau, ell);
                    return s;
                } else {
                    // Group multiplicities by diagonal |u - v|.
                    std::array<std::pair<Index, unsigned>, kMaxWalkLength> by_diag{};
                    std::size_t n = 0;
                    for (const Edge& e : g.edges()) {
                        const Index d = e.v - e.u;
                        std::size_t s = 0;
                        while (s < n && by_diag[s].first != d) ++s;
                        if (s == n) by_diag[n++] = {d, 0};
                        by_diag[s].second += e.mult;
                    }
                    double p = 1.0;
                    for (std::size_t s = 0; s < n; ++s) {
                        p *= detail::moment_at(m.moments, by_diag[s].second);
                        if (p == 0.0) return 0.0;
                    }
                    return p;
                }
            },
            model_);
    }

    double operator()(std::span<const Index> tuple) const { return (*this)(EdgeMultiset(tuple)); }

  private:
    CorrelationModel model_;
    std::size_t N_;
    std::vector<double> cw_table_;
};

inline double expected_product(const CorrelationModel& model, std::span<const Index> tuple, std::size_t N)
{
    for (Index i : tuple) {
        if (i >= N) throw DomainError("tuple index out of range");
    }
    return ProductEvaluator(model, N, tuple.size())(tuple);
}

/// Natural scale of a model: 1/sqrt(2b+1) for band models, 1/sqrt(N) otherwise.
inline double default_scale(const CorrelationModel& model, std::size_t N)
{
    if (const auto* b = std::get_if<BandModel>(&model)) {
        return 1.0 / std::sqrt(static_cast<double>(2 * b->b + 1));
    }
    return 1.0 / std::sqrt(static_cast<double>(N));
}

/*!
 * Exact E (1/N) tr((scale X)^k) by summing expected_product over all tuples
 * (band models skip tuples that touch an identically-zero entry).  Partial
 * sums are formed per leading index and reduced pairwise, so the result does
 * not depend on how the enumeration might be split.
 */
inline double expected_trace_moment(const CorrelationModel& model, std::size_t N, std::size_t k,
                                    std::optional<double> scale = std::nullopt)
{
    if (k == 0) return 1.0;
    if (!std::holds_alternative<BandModel>(model)) detail::check_cap(N, k);
    const ProductEvaluator eval(model, N, k);
    std::vector<double> partial(N, 0.0);
    std::size_t group = 0;
    detail::for_each_walk(
        N, k, [&](Index x, Index y) { return eval.live(x, y); },
        [&](std::size_t first) { group = first; },
        [&](std::span<const Index> t) { partial[group] += eval(t); });
    const double total = detail::pairwise_sum(partial) / static_cast<double>(N);
    if (scale) return total * std::pow(*scale, static_cast<double>(k));
    // Divide by the integer variance normalizer so even moments stay exact.
    const double v = 1.0 / (default_scale(model, N) * default_scale(model, N));
    return total / std::pow(std::round(v), static_cast<double>(k) / 2.0);
}

/// Polynomial extrapolation in h = 1/N through the points (1/n_i, y_i),
/// evaluated at h = 1/target (target = 0 means N -> infinity).  Neville's
/// scheme; with two points this is classical Richardson extrapolation.
inline double extrapolate_in_inverse_n(std::span<const double> ns, std::span<const double> ys,
                                       double target = 0.0)
{
    if (ns.size() != ys.size() || ns.empty()) throw DomainError("extrapolation needs matching points");
    const double h0 = target == 0.0 ? 0.0 : 1.0 / target;
    std::vector<double> h(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) h[i] = 1.0 / ns[i];
    std::vector<double> p(ys.begin(), ys.end());
    for (std::size_t level = 1; level < p.size(); ++level) {
        for (std::size_t i = 0; i + level < p.size(); ++i) {
            p[i] = ((h0 - h[i + level]) * p[i] + (h[i] - h0) * p[i + 1]) / (h[i] - h[i + level]);
        }
    }
    return p[0];
}

}  // namespace rmtlab
