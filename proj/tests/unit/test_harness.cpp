// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "rmtlab/harness/config.hpp"
#include "rmtlab/harness/presets.hpp"
#include "rmtlab/harness/report.hpp"
#include "rmtlab/harness/runner.hpp"

using namespace rmtlab;
using namespace rmtlab::harness;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(# small run
name = small
seed = 17
sizes = 24, 32
replicas = 5
stats.k_max = 6
ensemble.0.kind = wigner
ensemble.0.dist = gaussian
ensemble.1.kind = band
ensemble.1.bandwidth = fixed:4
ensemble.1.periodic = true
)";

fs::path temp_dir(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("rmtlab_test_" + name);
    fs::remove_all(p);
    return p;
}

json strip_timing(json j)
{
    for (auto& r : j["results"]) r.erase("wall_clock_s");
    return j;
}

TEST(Config, ParsesExample)
{
    const auto c = parse_config(kSmall);
    EXPECT_EQ(c.name, "small");
    EXPECT_EQ(c.seed, 17u);
    EXPECT_EQ(c.sizes, (std::vector<std::size_t>{24, 32}));
    EXPECT_EQ(c.replicas, 5u);
    EXPECT_EQ(c.stats.k_max, 6);
    ASSERT_EQ(c.ensembles.size(), 2u);
    EXPECT_EQ(std::get<Wigner>(c.ensembles[0]).dist, ScalarDist::gaussian());
    const auto& b = std::get<BandWigner>(c.ensembles[1]);
    EXPECT_TRUE(b.periodic);
    EXPECT_EQ(std::get<FixedBandwidth>(b.rule).b, 4u);
    EXPECT_TRUE(c.output.json);
    EXPECT_FALSE(c.output.csv);
}

TEST(Config, SingleEnsembleShorthand)
{
    const auto c = parse_config("sizes = 16\nensemble.kind = profile\nensemble.profile.breaks = 0, 0.25, 1\n"
                                "ensemble.profile.values = 1, 0\n");
    ASSERT_EQ(c.ensembles.size(), 1u);
    EXPECT_EQ(std::get<ProfileBand>(c.ensembles[0]).profile, Profile::band(0.25));
}

TEST(Config, AllKindsRoundTrip)
{
    const char* text = R"(sizes = 16, 32
replicas = 2
seed = 5
scaling = power:0.55
stats.k_max = 8
stats.ks_law = mixture:0.25@0.5, 0.75@1
stats.bulk_window = 2.5
stats.second_norm = false
output.dir = out/x
output.formats = csv,svg
ensemble.0.kind = wigner
ensemble.0.dist = two_point:0.3
ensemble.1.kind = band
ensemble.1.bandwidth = power:1:0.5
ensemble.2.kind = sparse_block
ensemble.2.pattern = antisymmetric
ensemble.3.kind = diagonal_process
ensemble.3.process = iid:gaussian
ensemble.4.kind = filled_process
ensemble.4.process = ar1:-0.25
ensemble.4.filling = row_by_row
ensemble.5.kind = diagonal_cw
ensemble.5.beta = 0.75
ensemble.6.kind = full_cw
ensemble.6.beta = 1.25
ensemble.7.kind = exchangeable_spin
ensemble.7.atoms = 0.3@0, 0.7@-0.5
ensemble.8.kind = rank_one
ensemble.9.kind = band
ensemble.9.bandwidth = linear:0.1
ensemble.10.kind = diagonal_process
ensemble.10.process = constant:rademacher
)";
    const auto c = parse_config(text);
    EXPECT_EQ(c.ensembles.size(), 11u);
    EXPECT_EQ(c.scaling.kind, ScalingKind::Power);
    EXPECT_EQ(c.stats.ks_law.components.size(), 2u);
    EXPECT_FALSE(c.output.json);
    const auto canon = to_config_text(c);
    const auto again = parse_config(canon);
    EXPECT_EQ(to_config_text(again), canon);
    EXPECT_EQ(config_hash(again), config_hash(c));
    EXPECT_EQ(again.stats, c.stats);
    EXPECT_EQ(again.output, c.output);
    EXPECT_EQ(again.scaling, c.scaling);
}

TEST(Config, HashIgnoresOutputButNotSeed)
{
    auto c = parse_config(kSmall);
    const auto h = config_hash(c);
    EXPECT_EQ(h.size(), 16u);
    c.output.dir = "elsewhere";
    EXPECT_EQ(config_hash(c), h);
    c.seed = 18;
    EXPECT_NE(config_hash(c), h);
}

struct BadConfig {
    const char* text;
    const char* fragment;
};

class ConfigErrors : public ::testing::TestWithParam<BadConfig> {};

TEST_P(ConfigErrors, Rejected)
{
    try {
        parse_config(GetParam().text);
        FAIL() << "accepted: " << GetParam().text;
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find(GetParam().fragment), std::string::npos) << e.what();
    }
}

INSTANTIATE_TEST_SUITE_P(
    Cases, ConfigErrors,
    ::testing::Values(BadConfig{"sizes = 8\nensemble.kind = wigner\nbogus = 1\n", "unknown key 'bogus'"},
                      BadConfig{"sizes = 8\nsizes = 9\nensemble.kind = wigner\n", "duplicate key"},
                      BadConfig{"sizes = 8\nensemble.dist = gaussian\n", "missing key"},
                      BadConfig{"sizes = eight\nensemble.kind = wigner\n", "not an unsigned integer"},
                      BadConfig{"sizes = 8\nstats.k_max = 13\nensemble.kind = wigner\n", "k_max"},
                      BadConfig{"sizes = 8\nensemble.kind = spiral\n", "unknown ensemble"},
                      BadConfig{"sizes = 8\nensemble.kind = wigner\nensemble.beta = 1\n", "unused key"},
                      BadConfig{"sizes = 8\nensemble.0.kind = wigner\nensemble.2.kind = wigner\n", "without gaps"},
                      BadConfig{"sizes = 8\nensemble.kind = wigner\noutput.formats = pdf\n", "unknown format"},
                      BadConfig{"sizes = 8\nensemble.kind = band\nensemble.bandwidth = fixed:4\n", "exceeds N"},
                      BadConfig{"sizes = 8\nensemble.kind = wigner\nstats.ks_law = mixture:0.5@1\n", "sum to 1"},
                      BadConfig{"ensemble.kind = wigner\n", "at least one size"},
                      BadConfig{"sizes = 8\n", "no ensemble"},
                      BadConfig{"sizes = 8\nensemble.kind = wigner\njust words\n", "line 3"},
                      BadConfig{"sizes = 8\nensemble.kind = filled_process\nensemble.process = markov:1\n",
                                "flip probability"},
                      BadConfig{"sizes = 8\nensemble.kind = wigner\nscaling = half\n", "scaling"}));

TEST(Config, ResourceLimit)
{
    EXPECT_THROW(parse_config("sizes = 9000\nensemble.kind = wigner\n"), ResourceError);
}

TEST(Scaling, Factors)
{
    const EnsembleSpec w = Wigner{};
    EXPECT_DOUBLE_EQ((Scaling{ScalingKind::Auto, 0}.factor(w, 64)), 0.125);
    EXPECT_DOUBLE_EQ((Scaling{ScalingKind::InvSqrtN, 0}.factor(w, 64)), 0.125);
    EXPECT_DOUBLE_EQ((Scaling{ScalingKind::InvN, 0}.factor(w, 64)), 1.0 / 64);
    EXPECT_DOUBLE_EQ((Scaling{ScalingKind::Power, 0.5}.factor(w, 64)), 0.125);
    EXPECT_DOUBLE_EQ((Scaling{ScalingKind::Constant, 3.0}.factor(w, 64)), 3.0);
}

TEST(AutoLaw, PerEnsemble)
{
    EXPECT_EQ(auto_law(Wigner{ScalarDist::two_point(0.6)})->components()[0].variance, 1.0 - 0.36);
    EXPECT_NEAR(auto_law(FullCW{2.0})->components()[0].variance, cw_variance(2.0), 1e-15);
    EXPECT_EQ(auto_law(ExchangeableSpin{{{0.5, 0.0}, {0.5, 0.8}}})->components().size(), 2u);
    EXPECT_FALSE(auto_law(RankOneE{}).has_value());
    EXPECT_FALSE(auto_law(Wigner{ScalarDist::two_point(1.0)}).has_value());
    EXPECT_FALSE(resolve_law({LawSpec::Kind::None, {}}, Wigner{}).has_value());
    EXPECT_EQ(resolve_law({LawSpec::Kind::Mixture, {{1.0, 2.0}}}, Wigner{})->components()[0].variance, 2.0);
}

TEST(Presets, AllPresent)
{
    const std::vector<std::string> names = {
        "wigner-semicircle", "wigner-norm",       "band-sub-linear",        "band-linear-nonperiodic",
        "band-periodic",     "profile-catalano-pair", "sparse-blocks",      "toeplitz",
        "ar1-diagonals",     "markov-diagonal-filling", "cw-diagonal-sweep", "cw-full-sweep",
        "cw-norm-sweep",     "exchangeable-mixture",    "rank-one"};
    EXPECT_EQ(presets().size(), names.size());
    for (const auto& n : names) {
        const auto c = preset(n);
        EXPECT_EQ(c.name, n);
        EXPECT_EQ(to_config_text(parse_config(to_config_text(c))), to_config_text(c));
    }
}

TEST(Presets, RankOne)
{
    const auto out = run(preset("rank-one"), {1, true});
    const auto& r = out.report.results[0];
    EXPECT_NEAR(r.op_norm->mean, 10.0, 1e-12);
    const Esd esd(out.spectra[0].eigenvalues);
    EXPECT_DOUBLE_EQ(esd.cdf(1e-9) - esd.cdf(-1e-9), 0.99);
}

TEST(Presets, UnknownNameListsAvailable)
{
    try {
        preset("nope");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("wigner-semicircle"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("exchangeable-mixture"), std::string::npos);
    }
}

TEST(Runner, ShapeOfReport)
{
    const auto cfg = parse_config(kSmall);
    const auto out = run(cfg);
    ASSERT_EQ(out.report.results.size(), 4u);
    EXPECT_EQ(out.report.meta.seed, 17u);
    EXPECT_EQ(out.report.meta.config_hash, config_hash(cfg));
    EXPECT_EQ(out.report.meta.version, kVersion);
    const auto& r = out.report.results[0];
    EXPECT_EQ(r.N, 24u);
    EXPECT_EQ(r.ensemble_index, 0u);
    EXPECT_EQ(r.moments.size(), 6u);
    EXPECT_NEAR(r.moments[0].mean, 0.0, 0.2);
    ASSERT_TRUE(r.ks.has_value());
    EXPECT_GT(r.ks->mean, 0.0);
    ASSERT_TRUE(r.op_norm.has_value());
    EXPECT_LE(r.op_norm->min, r.op_norm->mean);
    EXPECT_LE(r.op_norm->mean, r.op_norm->max);
    EXPECT_TRUE(r.second_norm.has_value());
    EXPECT_TRUE(out.spectra.empty());
    EXPECT_EQ(out.report.results[3].ensemble_index, 1u);
    EXPECT_EQ(out.report.results[3].N, 32u);
    EXPECT_DOUBLE_EQ(out.report.results[3].scale, 1.0 / 3.0);
}

TEST(Runner, IndependentOfThreadCount)
{
    const auto cfg = parse_config(kSmall);
    const auto a = run(cfg, {1, true});
    const auto b = run(cfg, {3, true});
    EXPECT_EQ(strip_timing(to_json(a.report)), strip_timing(to_json(b.report)));
    ASSERT_EQ(a.spectra.size(), b.spectra.size());
    for (std::size_t i = 0; i < a.spectra.size(); ++i) EXPECT_EQ(a.spectra[i].eigenvalues, b.spectra[i].eigenvalues);
}

TEST(Runner, SeedChangesResults)
{
    auto cfg = parse_config(kSmall);
    const auto a = run(cfg);
    cfg.seed = 99;
    const auto b = run(cfg);
    EXPECT_NE(a.report.results[0].moments[1].mean, b.report.results[0].moments[1].mean);
}

TEST(Runner, ReplicaMatchesDirectComputation)
{
    const auto cfg = parse_config("seed = 3\nsizes = 20\nreplicas = 2\nensemble.kind = wigner\n");
    const auto out = run(cfg, {1, true});
    auto s = replica_stream(3, 0, 20, 1);
    const auto ev = eig_sym(build(cfg.ensembles[0], 20, s)).eigenvalues;
    ASSERT_EQ(out.spectra[1].replica, 1u);
    for (std::size_t i = 0; i < 20; ++i) EXPECT_DOUBLE_EQ(out.spectra[1].eigenvalues[i], ev[i] / std::sqrt(20.0));
}

TEST(Runner, BulkWindowCountsOutliers)
{
    const auto cfg = parse_config("sizes = 20\nstats.bulk_window = 3\nstats.ks_law = none\nensemble.kind = rank_one\n");
    const auto out = run(cfg);
    const auto& r = out.report.results[0];
    EXPECT_EQ(r.outliers, 1.0);
    EXPECT_NEAR(r.moments[1].mean, 0.0, 1e-20);
    EXPECT_NEAR(r.op_norm->mean, std::sqrt(20.0), 1e-12);
    EXPECT_NEAR(r.op_norm_over_n->mean, 1.0, 1e-12);
    EXPECT_FALSE(r.ks.has_value());
}

TEST(Runner, InvariantChecks)
{
    const auto out = run(parse_config(kSmall));
    for (const auto& r : out.report.results) EXPECT_EQ(r.invariants_checked, 5u);

    auto s = replica_stream(1, 0, 16, 0);
    const auto m = build(EnsembleSpec{Wigner{}}, 16, s);
    auto sp = eig_sym(m);
    EXPECT_NO_THROW(check_invariants(m, sp));
    sp.eigenvalues[3] += 1e-6;
    EXPECT_THROW(check_invariants(m, sp), NumericalError);
    sp.eigenvalues[3] -= 1e-6;
    // A swap of sign keeps the squares but breaks the trace.
    sp.eigenvalues.back() = -sp.eigenvalues.back();
    EXPECT_THROW(check_invariants(m, sp), NumericalError);
}

TEST(Runner, ParallelForPropagatesErrors)
{
    EXPECT_THROW(harness::detail::parallel_for(10, 3,
                                               [](std::size_t i) {
                                                   if (i == 4) throw NumericalError("boom");
                                               }),
                 NumericalError);
    int n = 0;
    harness::detail::parallel_for(0, 4, [&](std::size_t) { ++n; });
    EXPECT_EQ(n, 0);
}

TEST(Report, JsonRoundTrip)
{
    const auto out = run(parse_config(kSmall));
    const json j = to_json(out.report);
    EXPECT_TRUE(j["meta"].contains("config_hash"));
    EXPECT_TRUE(j["results"][0]["moments"][0].contains("stderr"));
    EXPECT_EQ(to_json(report_from_json(j)), j);
    EXPECT_THROW(report_from_json(json{{"meta", 1}}), IoError);
}

TEST(Report, JsonNullsForDisabledStats)
{
    const auto cfg = parse_config(
        "sizes = 8\nstats.ks_law = none\nstats.op_norm = false\nstats.second_norm = false\nensemble.kind = wigner\n");
    const json j = to_json(run(cfg).report);
    EXPECT_TRUE(j["results"][0]["ks"].is_null());
    EXPECT_TRUE(j["results"][0]["op_norm"].is_null());
    EXPECT_TRUE(j["results"][0]["second_norm"].is_null());
    EXPECT_EQ(to_json(report_from_json(j)), j);
}

TEST(Report, CsvRoundTrip)
{
    const std::vector<double> x = {-1.25, 0.1, 1.0 / 3.0, 2e-300};
    const auto text = spectrum_csv(x);
    EXPECT_EQ(text.rfind("lambda\n", 0), 0u);
    EXPECT_EQ(parse_spectrum_csv(text), x);
    EXPECT_THROW(parse_spectrum_csv("x\n1\n"), IoError);
    EXPECT_THROW(parse_spectrum_csv("lambda\nabc\n"), IoError);
}

TEST(Report, SvgContents)
{
    std::vector<double> x = {-1.0, -0.5, 0.0, 0.2, 0.4, 0.9, 1.3, 7.0};
    const auto svg = histogram_svg(x, 2.5, MixtureSC::semicircle(1.0), "test");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
    EXPECT_NE(svg.find("<path"), std::string::npos);
    EXPECT_NE(svg.find("1 outlier beyond"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    const auto plain = histogram_svg(x, 10.0, std::nullopt, "none");
    EXPECT_EQ(plain.find("<path"), std::string::npos);
    EXPECT_EQ(plain.find("outlier"), std::string::npos);
}

TEST(Report, WriteOutputs)
{
    auto cfg = parse_config(kSmall);
    cfg.output.csv = cfg.output.svg = true;
    const auto dir = temp_dir("write");
    const auto out = run(cfg, {1, true});
    const auto files = write_outputs(cfg, out, dir);
    // 1 json + 2 ensembles * 2 sizes * 5 replicas csv + 4 svg
    EXPECT_EQ(files.size(), 1u + 20u + 4u);
    for (const auto& f : files) EXPECT_TRUE(fs::exists(f)) << f;
    std::ifstream in(dir / "report.json");
    const json j = json::parse(in);
    EXPECT_EQ(j["meta"]["seed"], 17);
    std::ifstream csv(dir / "spectra" / "e1_N32_r4.csv");
    std::stringstream ss;
    ss << csv.rdbuf();
    EXPECT_EQ(parse_spectrum_csv(ss.str()), out.spectra.back().eigenvalues);
    fs::remove_all(dir);
}

TEST(Report, WriteFailureIsIoError)
{
    const auto dir = temp_dir("blocked");
    fs::create_directories(dir.parent_path());
    { std::ofstream f(dir); f << "file, not directory"; }
    const auto cfg = parse_config(kSmall);
    const auto out = run(cfg);
    EXPECT_THROW(write_outputs(cfg, out, dir), IoError);
    fs::remove_all(dir);
}

}  // namespace
