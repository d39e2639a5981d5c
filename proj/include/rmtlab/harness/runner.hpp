// SPDX-License-Identifier: Apache-2.0
//
// Replica runner: builds, diagonalizes and summarizes ensembles over a grid
// of sizes.  Every replica draws from its own stream derived from
// (seed, ensemble, N, replica), and results are reduced in replica order, so
// the output does not depend on the thread count.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/harness/config.hpp"
#include "rmtlab/laws.hpp"
#include "rmtlab/sampling.hpp"
#include "rmtlab/spectra.hpp"

namespace rmtlab::harness {

struct MeanErr {
    double mean = 0.0;
    double stderr_ = 0.0;
};
struct MomentStat {
    int k = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
};
struct KsStat {
    std::string law;
    double mean = 0.0;
    double stderr_ = 0.0;
};
struct RangeStat {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct SizeResult {
    std::size_t ensemble_index = 0;
    std::string ensemble;
    std::size_t N = 0;
    std::size_t replicas = 0;
    double scale = 1.0;
    std::vector<MomentStat> moments;
    std::optional<KsStat> ks;
    std::optional<RangeStat> op_norm;         // of the scaled matrix
    std::optional<RangeStat> op_norm_over_n;  // of the unscaled matrix, divided by N
    std::optional<MeanErr> second_norm;       // of the scaled matrix
    /// Mean number of scaled eigenvalues outside the bulk window per replica.
    double outliers = 0.0;
    /// Matrices whose spectrum passed the trace and Frobenius identities.
    std::size_t invariants_checked = 0;
    double wall_clock_s = 0.0;
};

struct RunMeta {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string version = kVersion;
    std::string name;
};

struct RunReport {
    RunMeta meta;
    std::vector<SizeResult> results;
};

/// Scaled spectrum of one replica, retained for CSV and SVG output.
struct SpectrumRecord {
    std::size_t ensemble_index = 0;
    std::size_t N = 0;
    std::size_t replica = 0;
    std::vector<double> eigenvalues;
};

struct RunOptions {
    unsigned threads = 1;
    bool keep_spectra = false;
};

struct RunOutcome {
    RunReport report;
    std::vector<SpectrumRecord> spectra;
};

/// Per-replica statistics before reduction.
struct ReplicaStats {
    std::vector<double> moments;  // index k - 1
    double ks = 0.0;
    double op_norm = 0.0;
    double op_norm_over_n = 0.0;
    double second_norm = 0.0;
    std::size_t outliers = 0;
    std::vector<double> eigenvalues;
};

namespace detail {

inline MeanErr mean_err(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

inline RangeStat range(const std::vector<double>& xs)
{
    RangeStat r{0.0, xs.front(), xs.front()};
    for (double x : xs) {
        r.mean += x;
        r.min = std::min(r.min, x);
        r.max = std::max(r.max, x);
    }
    r.mean /= static_cast<double>(xs.size());
    return r;
}

/// Run fn(i) for i in [0, count) on up to `threads` workers.  The first
/// exception stops further work and is rethrown on the calling thread.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Stream for one replica.
inline RngStream replica_stream(std::uint64_t seed, std::size_t ensemble, std::size_t N, std::size_t replica)
{
    return derive_stream(seed, {{"ensemble", ensemble}, {"N", N}, {"replica", replica}});
}

/// Checks sum(lambda) = tr X and sum(lambda^2) = |X|_F^2; throws
/// NumericalError when either fails beyond rounding.
inline void check_invariants(const SymMatrix& m, const Spectrum& sp)
{
    long double sum = 0.0L, sq = 0.0L;
    for (double l : sp.eigenvalues) {
        sum += l;
        sq += static_cast<long double>(l) * l;
    }
    const double fro2 = m.frobenius_sq();
    const double tol = 1e-12 * std::sqrt(static_cast<double>(std::max<std::size_t>(m.size(), 1)));
    const double trace_err = std::abs(static_cast<double>(sum) - m.trace());
    const double fro_err = std::abs(static_cast<double>(sq) - fro2);
    if (trace_err > tol * (1.0 + std::sqrt(fro2)) || fro_err > tol * (1.0 + fro2)) {
        throw NumericalError("spectrum fails the trace/Frobenius identities (trace error " +
                             std::to_string(trace_err) + ", Frobenius error " + std::to_string(fro_err) + ")");
    }
}

/// Statistics of a single replica.
inline ReplicaStats run_replica(const ExperimentConfig& cfg, std::size_t e, std::size_t N, std::size_t r,
                                const std::optional<MixtureSC>& law, bool keep)
{
    const auto& spec = cfg.ensembles[e];
    auto stream = replica_stream(cfg.seed, e, N, r);
    const SymMatrix m = build(spec, N, stream);
    const double scale = cfg.scaling.factor(spec, N);
    Spectrum sp;
    try {
        sp = eig_sym(m);
        check_invariants(m, sp);
    } catch (const NumericalError& ex) {
        throw NumericalError(std::string(ex.what()) + " [ensemble " + std::to_string(e) + " (" +
                             ensemble_kind(spec) + "), N " + std::to_string(N) + ", replica " +
                             std::to_string(r) + ", seed " + std::to_string(cfg.seed) + "]");
    }

    ReplicaStats out;
    const Esd full(sp, scale);
    const Esd bulk = cfg.stats.bulk_window ? full.within(*cfg.stats.bulk_window) : full;
    out.outliers = full.values().size() - bulk.values().size();
    for (int k = 1; k <= cfg.stats.k_max; ++k) out.moments.push_back(bulk.moment(k));
    if (law) {
        out.ks = bulk.values().empty() ? 1.0 : ks(bulk, [&](double x) { return law->cdf(x); });
    }
    const double op = op_norm(sp);
    out.op_norm = scale * op;
    out.op_norm_over_n = op / static_cast<double>(N);
    if (cfg.stats.second_norm && N >= 2) out.second_norm = scale * second_norm(sp);
    if (keep) out.eigenvalues.assign(full.values().begin(), full.values().end());
    return out;
}

/// Run every (ensemble, N) cell of the configuration.
inline RunOutcome run(const ExperimentConfig& cfg, const RunOptions& opt = {})
{
    validate(cfg);
    RunOutcome outcome;
    outcome.report.meta = {cfg.seed, config_hash(cfg), kVersion, cfg.name};

    for (std::size_t e = 0; e < cfg.ensembles.size(); ++e) {
        const auto& spec = cfg.ensembles[e];
        const auto law = resolve_law(cfg.stats.ks_law, spec);
        for (std::size_t N : cfg.sizes) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<ReplicaStats> reps(cfg.replicas);
            detail::parallel_for(cfg.replicas, opt.threads, [&](std::size_t r) {
                reps[r] = run_replica(cfg, e, N, r, law, opt.keep_spectra);
            });

            SizeResult res;
            res.ensemble_index = e;
            res.ensemble = describe(spec);
            res.N = N;
            res.replicas = cfg.replicas;
            res.scale = cfg.scaling.factor(spec, N);
            std::vector<double> buf(cfg.replicas);
            auto collect = [&](auto field) {
                for (std::size_t r = 0; r < cfg.replicas; ++r) buf[r] = field(reps[r]);
                return buf;
            };
            for (int k = 1; k <= cfg.stats.k_max; ++k) {
                const auto me = detail::mean_err(collect([&](const ReplicaStats& s) { return s.moments[k - 1]; }));
                res.moments.push_back({k, me.mean, me.stderr_});
            }
            if (law) {
                const auto me = detail::mean_err(collect([](const ReplicaStats& s) { return s.ks; }));
                res.ks = KsStat{law_label(*law), me.mean, me.stderr_};
            }
            if (cfg.stats.op_norm) {
                res.op_norm = detail::range(collect([](const ReplicaStats& s) { return s.op_norm; }));
                res.op_norm_over_n = detail::range(collect([](const ReplicaStats& s) { return s.op_norm_over_n; }));
            }
            if (cfg.stats.second_norm && N >= 2) {
                res.second_norm = detail::mean_err(collect([](const ReplicaStats& s) { return s.second_norm; }));
            }
            res.outliers = detail::mean_err(collect([](const ReplicaStats& s) {
                               return static_cast<double>(s.outliers);
                           })).mean;
            res.invariants_checked = cfg.replicas;
            res.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            outcome.report.results.push_back(std::move(res));

            if (opt.keep_spectra) {
                for (std::size_t r = 0; r < cfg.replicas; ++r) {
                    outcome.spectra.push_back({e, N, r, std::move(reps[r].eigenvalues)});
                }
            }
        }
    }
    return outcome;
}

}  // namespace rmtlab::harness
