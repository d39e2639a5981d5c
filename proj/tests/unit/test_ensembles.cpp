// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "rmtlab/ensembles.hpp"

using namespace rmtlab;

namespace {

bool is_spin(double x) { return x == 1.0 || x == -1.0; }

TEST(WrapDist, Examples)
{
    EXPECT_EQ(wrap_dist(0, 7, 8), 1u);
    EXPECT_EQ(wrap_dist(2, 5, 8), 3u);
    EXPECT_EQ(wrap_dist(1, 5, 8), 4u);
    EXPECT_EQ(wrap_dist(3, 3, 8), 0u);
    EXPECT_THROW(wrap_dist(0, 8, 8), DomainError);
}

TEST(Bandwidth, Rules)
{
    EXPECT_EQ(resolve_bandwidth(FixedBandwidth{3}, 10), 3u);
    EXPECT_EQ(resolve_bandwidth(LinearBandwidth{0.125}, 2048), 256u);
    EXPECT_EQ(resolve_bandwidth(LinearBandwidth{0.125}, 1000), 125u);
    EXPECT_EQ(resolve_bandwidth(LinearBandwidth{0.125}, 1001), 126u);
    EXPECT_EQ(resolve_bandwidth(PowerBandwidth{1.0, 0.6}, 2048),
              static_cast<std::size_t>(std::ceil(std::pow(2048.0, 0.6))));
    EXPECT_EQ(resolve_bandwidth(PowerBandwidth{1.0, 0.5}, 4096), 64u);  // exact power, no round-up
    EXPECT_THROW(resolve_bandwidth(FixedBandwidth{5}, 10), ConfigError);
    EXPECT_NO_THROW(resolve_bandwidth(FixedBandwidth{4}, 9));
    EXPECT_THROW(resolve_bandwidth(LinearBandwidth{0.0}, 10), ConfigError);
    EXPECT_THROW(resolve_bandwidth(PowerBandwidth{1.0, -1.0}, 10), ConfigError);
}

TEST(Profile, EvaluationAndValidation)
{
    const auto p = Profile::periodic_band(0.25);
    EXPECT_EQ(p(0.0), 1.0);
    EXPECT_EQ(p(0.2), 1.0);
    EXPECT_EQ(p(0.25), 0.0);
    EXPECT_EQ(p(0.5), 0.0);
    EXPECT_EQ(p(0.8), 1.0);
    EXPECT_EQ(p(1.0), 1.0);
    EXPECT_EQ(Profile::band(0.25)(0.9), 0.0);
    EXPECT_EQ(Profile::constant(2.0)(0.4), 2.0);
    EXPECT_THROW(Profile({0.0, 0.5}, {1.0}), ConfigError);
    EXPECT_THROW(Profile({0.0, 0.6, 0.5, 1.0}, {1.0, 1.0, 1.0}), ConfigError);
    EXPECT_THROW(Profile({0.0, 1.0}, {1.0, 2.0}), ConfigError);
    EXPECT_THROW(Profile::periodic_band(0.5), ConfigError);
}

double phi_by_midpoint(const Profile& p, int n)
{
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = p(std::abs(i - j) / static_cast<double>(n) + 0.0);
            s += a * a;
        }
    }
    return s / (static_cast<double>(n) * n);
}

TEST(Profile, PhiClosedForm)
{
    EXPECT_DOUBLE_EQ(phi(Profile::band(0.25)), 0.4375);
    EXPECT_DOUBLE_EQ(phi(Profile::periodic_band(0.25)), 0.5);
    EXPECT_DOUBLE_EQ(phi(Profile::constant(1.0)), 1.0);
    EXPECT_DOUBLE_EQ(phi(Profile::constant(3.0)), 9.0);
    EXPECT_THROW(phi(Profile::constant(0.0)), DomainError);
}

TEST(Profile, PhiMatchesNumericalIntegral)
{
    const Profile p({0.0, 0.1, 0.45, 0.7, 1.0}, {2.0, -1.0, 0.5, 1.5});
    EXPECT_NEAR(phi(p), phi_by_midpoint(p, 2000), 5e-3);
    EXPECT_NEAR(phi(Profile::band(0.25)), phi_by_midpoint(Profile::band(0.25), 2000), 2e-3);
}

TEST(FillingMap, SmallExamples)
{
    EXPECT_EQ(filling_map(3, FillingOrder::Diagonal),
              (std::vector<Cell>{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}, {0, 2}}));
    EXPECT_EQ(filling_map(3, FillingOrder::RowByRow),
              (std::vector<Cell>{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}));
    EXPECT_TRUE(filling_map(0, FillingOrder::Diagonal).empty());
}

TEST(FillingMap, IsBijectionOntoUpperTriangle)
{
    for (auto order : {FillingOrder::Diagonal, FillingOrder::RowByRow}) {
        const std::size_t N = 23;
        const auto cells = filling_map(N, order);
        ASSERT_EQ(cells.size(), N * (N + 1) / 2);
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& c : cells) {
            ASSERT_LE(c.row, c.col);
            ASSERT_LT(c.col, N);
            seen.insert({c.row, c.col});
        }
        EXPECT_EQ(seen.size(), cells.size());
    }
}

TEST(Build, WignerIsSymmetricSpinAndReproducible)
{
    auto s1 = derive_stream(1, {{"t", 0}});
    auto s2 = derive_stream(1, {{"t", 0}});
    const auto a = build(Wigner{ScalarDist::rademacher()}, 20, s1);
    const auto b = build(Wigner{ScalarDist::rademacher()}, 20, s2);
    EXPECT_EQ(a, b);
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            EXPECT_EQ(a(i, j), a(j, i));
            EXPECT_TRUE(is_spin(a(i, j)));
        }
    }
    auto s3 = derive_stream(1, {{"t", 1}});
    EXPECT_NE(a, build(Wigner{ScalarDist::rademacher()}, 20, s3));
}

TEST(Build, WignerGaussianEntryMoments)
{
    auto s = derive_stream(2);
    const std::size_t N = 300;
    const auto m = build(Wigner{ScalarDist::gaussian()}, N, s);
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i; j < N; ++j, ++n) {
            sum += m(i, j);
            sq += m(i, j) * m(i, j);
        }
    }
    EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(Build, BandSupport)
{
    auto s = derive_stream(3);
    const auto np = build(BandWigner{ScalarDist::rademacher(), FixedBandwidth{1}, false}, 8, s);
    const auto pe = build(BandWigner{ScalarDist::rademacher(), FixedBandwidth{1}, true}, 8, s);
    EXPECT_EQ(np(0, 7), 0.0);
    EXPECT_TRUE(is_spin(pe(0, 7)));
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            const std::size_t d = i > j ? i - j : j - i;
            EXPECT_EQ(np(i, j) != 0.0, d <= 1);
            EXPECT_EQ(pe(i, j) != 0.0, wrap_dist(i, j, 8) <= 1);
        }
    }
}

TEST(Build, ProfileSupport)
{
    auto s = derive_stream(4);
    const std::size_t N = 16;
    const auto m = build(ProfileBand{ScalarDist::rademacher(), Profile::band(0.25)}, N, s);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            const std::size_t d = i > j ? i - j : j - i;
            EXPECT_EQ(m(i, j) != 0.0, d < 4) << i << "," << j;  // |i-j|/N < 1/4
        }
    }
}

TEST(Build, SparseBlockStructure)
{
    for (auto pattern : {BlockPattern::Antisymmetric, BlockPattern::Symmetric}) {
        auto s = derive_stream(5);
        const std::size_t N = 12, h = 6;
        const auto m = build(SparseBlock{pattern, ScalarDist::rademacher()}, N, s);
        const double sign = pattern == BlockPattern::Antisymmetric ? -1.0 : 1.0;
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < h; ++j) {
                EXPECT_EQ(m(i + h, j + h), sign * m(i, j));
                EXPECT_EQ(m(i, j + h), m(j, i + h));  // B is symmetric
                EXPECT_TRUE(is_spin(m(i, j + h)));
            }
        }
    }
    auto s = derive_stream(5);
    EXPECT_THROW(build(SparseBlock{BlockPattern::Symmetric, ScalarDist::rademacher()}, 7, s), ConfigError);
}

TEST(Build, ToeplitzFromConstantDiagonals)
{
    auto s = derive_stream(6);
    const std::size_t N = 30;
    const auto m = build(DiagonalProcess{ConstantProcess{ScalarDist::rademacher()}}, N, s);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            const std::size_t d = i > j ? i - j : j - i;
            EXPECT_EQ(m(i, j), m(0, d));
        }
    }
}

TEST(Build, DiagonalProcessUsesPerDiagonalStreams)
{
    // Diagonal l is the process path drawn from child stream ("diagonal", l).
    auto s = derive_stream(7, {{"x", 2}});
    const std::size_t N = 10;
    const ProcessSpec proc = GaussAR1{0.5};
    const auto m = build(DiagonalProcess{proc}, N, s);
    for (std::size_t l : {0u, 3u, 9u}) {
        auto d = derive_stream(7, {{"x", 2}, {"diagonal", l}});
        const auto path = sample_process(proc, N - l, d);
        for (std::size_t i = 0; i + l < N; ++i) EXPECT_EQ(m(i, i + l), path[i]);
    }
}

TEST(Build, FilledProcessFollowsFilling)
{
    auto s = derive_stream(8);
    auto replay = s;
    const std::size_t N = 9;
    const ProcessSpec proc = MarkovTwoState{0.25};
    const auto m = build(FilledProcess{proc, FillingOrder::Diagonal}, N, s);
    const auto cells = filling_map(N, FillingOrder::Diagonal);
    const auto path = sample_process(proc, cells.size(), replay);
    for (std::size_t t = 0; t < cells.size(); ++t) EXPECT_EQ(m(cells[t].row, cells[t].col), path[t]);
}

TEST(Build, DiagonalCurieWeiss)
{
    auto s = derive_stream(9);
    const std::size_t N = 40;
    const auto m = build(DiagonalCW{3.0}, N, s);
    // At beta = 3 each diagonal of length >= 20 is strongly magnetized.
    for (std::size_t l = 0; l + 20 <= N; ++l) {
        double sum = 0.0;
        for (std::size_t i = 0; i + l < N; ++i) {
            ASSERT_TRUE(is_spin(m(i, i + l)));
            sum += m(i, i + l);
        }
        EXPECT_GT(std::abs(sum) / (N - l), 0.5) << l;
    }
}

TEST(Build, FullCurieWeissMagnetization)
{
    const std::size_t N = 64;
    for (double beta : {0.5, 2.0}) {
        auto s = derive_stream(10, {{"beta", static_cast<std::uint64_t>(beta * 10)}});
        const auto m = build(FullCW{beta}, N, s);
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = i; j < N; ++j) sum += m(i, j);
        }
        const double mean = std::abs(sum) / (N * (N + 1) / 2.0);
        if (beta > 1.0) {
            EXPECT_NEAR(mean, solve_m(beta), 0.05);
        } else {
            EXPECT_LT(mean, 0.05);
        }
    }
}

TEST(Build, RankOneAndExchangeable)
{
    auto s = derive_stream(11);
    const auto e = build(RankOneE{}, 5, s);
    EXPECT_EQ(e, SymMatrix(5, 1.0));

    const ExchangeableSpin spec{{{0.5, 0.0}, {0.5, 0.8}}};
    int high = 0;
    for (std::uint64_t r = 0; r < 400; ++r) {
        auto st = derive_stream(12, {{"r", r}});
        const auto d = sample_exchangeable(spec, 40, st);
        ASSERT_TRUE(d.tau == 0.0 || d.tau == 0.8);
        if (d.tau == 0.8) {
            ++high;
            double sum = 0.0;
            for (std::size_t i = 0; i < 40; ++i) {
                for (std::size_t j = i; j < 40; ++j) sum += d.matrix(i, j);
            }
            EXPECT_NEAR(sum / 820.0, 0.8, 0.15);
        }
    }
    EXPECT_NEAR(high / 400.0, 0.5, 5 * std::sqrt(0.25 / 400));
}

TEST(Validate, Errors)
{
    EXPECT_THROW(validate(EnsembleSpec{Wigner{}}, 0), ConfigError);
    EXPECT_THROW(validate(EnsembleSpec{ExchangeableSpin{{{0.5, 0.0}}}}, 4), ConfigError);
    EXPECT_THROW(validate(EnsembleSpec{ExchangeableSpin{}}, 4), ConfigError);
    EXPECT_THROW(validate(EnsembleSpec{ExchangeableSpin{{{1.0, 1.5}}}}, 4), ConfigError);
    EXPECT_THROW(validate(EnsembleSpec{FullCW{-1.0}}, 4), ConfigError);
    EXPECT_THROW(validate(EnsembleSpec{DiagonalProcess{GaussAR1{1.0}}}, 4), ConfigError);
    EXPECT_THROW(validate(EnsembleSpec{ProfileBand{ScalarDist::rademacher(), Profile::constant(0.0)}}, 4),
                 DomainError);
}

TEST(NormFactor, PerEnsemble)
{
    EXPECT_DOUBLE_EQ(norm_factor(Wigner{}, 100), 0.1);
    EXPECT_DOUBLE_EQ(norm_factor(BandWigner{ScalarDist::rademacher(), FixedBandwidth{12}, false}, 100), 0.2);
    EXPECT_DOUBLE_EQ(norm_factor(ProfileBand{ScalarDist::rademacher(), Profile::periodic_band(0.25)}, 2048),
                     1.0 / 32.0);
    EXPECT_DOUBLE_EQ(norm_factor(FullCW{2.0}, 1024), 1.0 / 32.0);
}

TEST(EnsembleKind, Names)
{
    EXPECT_EQ(ensemble_kind(Wigner{}), "wigner");
    EXPECT_EQ(ensemble_kind(RankOneE{}), "rank_one");
    EXPECT_EQ(ensemble_kind(FilledProcess{}), "filled_process");
}

TEST(SparseCounts, BothPatterns)
{
    for (auto pattern : {BlockPattern::Antisymmetric, BlockPattern::Symmetric}) {
        for (std::size_t N : {8u, 16u, 32u, 64u}) {
            const auto c = verify_sparse_counts(pattern, N);
            EXPECT_EQ(c.max_class_bound, 1u);
            EXPECT_EQ(c.chained, 0u);
            EXPECT_EQ(c.max_row_related, 4 * N - 4);
        }
    }
    EXPECT_THROW(verify_sparse_counts(BlockPattern::Symmetric, 7), ConfigError);
}

}  // namespace
