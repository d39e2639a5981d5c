// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration and its text format.
//
// The format is line oriented: `key = value`, `#` starts a comment, blank
// lines are ignored.  Keys are dotted paths.  Ensemble keys are written
// `ensemble.<field>` for a single ensemble or `ensemble.<i>.<field>` for a
// sweep over several (i = 0, 1, ...).  See README.md for the full grammar.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/laws.hpp"

namespace rmtlab::harness {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kMaxMomentOrder = 12;

enum class ScalingKind { Auto, InvSqrtN, InvN, Power, Constant };

/// Multiplier applied to eigenvalues before statistics are taken.
struct Scaling {
    ScalingKind kind = ScalingKind::Auto;
    double value = 0.0;  // exponent for Power, factor for Constant

    double factor(const EnsembleSpec& spec, std::size_t N) const
    {
        const auto n = static_cast<double>(N);
        switch (kind) {
            case ScalingKind::Auto: return norm_factor(spec, N);
            case ScalingKind::InvSqrtN: return 1.0 / std::sqrt(n);
            case ScalingKind::InvN: return 1.0 / n;
            case ScalingKind::Power: return std::pow(n, -value);
            case ScalingKind::Constant: return value;
        }
        return 1.0;
    }
    friend bool operator==(const Scaling&, const Scaling&) = default;
};

/// Reference law for the KS statistic.
struct LawSpec {
    enum class Kind { Auto, None, Mixture };
    Kind kind = Kind::Auto;
    std::vector<SemicircleComponent> components;  // for Mixture

    friend bool operator==(const LawSpec& a, const LawSpec& b)
    {
        if (a.kind != b.kind || a.components.size() != b.components.size()) return false;
        for (std::size_t i = 0; i < a.components.size(); ++i) {
            if (a.components[i].weight != b.components[i].weight ||
                a.components[i].variance != b.components[i].variance) {
                return false;
            }
        }
        return true;
    }
};

/// The limit law an ensemble is compared against when the law is `auto`.
inline std::optional<MixtureSC> auto_law(const EnsembleSpec& spec)
{
    return std::visit(
        [](const auto& s) -> std::optional<MixtureSC> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, FullCW>) {
                return MixtureSC::semicircle(cw_variance(s.beta));
            } else if constexpr (std::is_same_v<S, ExchangeableSpin>) {
                std::vector<SemicircleComponent> parts;
                for (const auto& a : s.atoms) parts.push_back({a.weight, 1.0 - a.tau * a.tau});
                return MixtureSC(parts);
            } else if constexpr (std::is_same_v<S, Wigner> || std::is_same_v<S, BandWigner> ||
                                 std::is_same_v<S, ProfileBand> || std::is_same_v<S, SparseBlock>) {
                const double v = s.dist.variance();
                if (!(v > 0.0)) return std::nullopt;
                return MixtureSC::semicircle(v);
            } else if constexpr (std::is_same_v<S, RankOneE>) {
                return std::nullopt;
            } else {
                return MixtureSC::semicircle(1.0);
            }
        },
        spec);
}

inline std::optional<MixtureSC> resolve_law(const LawSpec& law, const EnsembleSpec& spec)
{
    switch (law.kind) {
        case LawSpec::Kind::None: return std::nullopt;
        case LawSpec::Kind::Mixture: return MixtureSC(law.components);
        case LawSpec::Kind::Auto: return auto_law(spec);
    }
    return std::nullopt;
}

inline std::string law_label(const MixtureSC& mix)
{
    std::ostringstream os;
    os.precision(6);
    const auto& c = mix.components();
    if (c.size() == 1) {
        os << "semicircle(v=" << c[0].variance << ")";
        return os.str();
    }
    os << "mixture(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        os << (i ? ", " : "") << c[i].weight << "*sc(" << c[i].variance << ")";
    }
    os << ")";
    return os.str();
}

struct StatsRequest {
    int k_max = 4;
    LawSpec ks_law;
    bool op_norm = true;
    bool second_norm = true;
    /// When set, moments and KS use only eigenvalues with |x| <= window.
    std::optional<double> bulk_window;

    friend bool operator==(const StatsRequest&, const StatsRequest&) = default;
};

struct OutputSpec {
    std::string dir = ".";
    bool json = true;
    bool csv = false;
    bool svg = false;

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::vector<EnsembleSpec> ensembles;
    std::vector<std::size_t> sizes;
    std::size_t replicas = 1;
    std::uint64_t seed = 0;
    Scaling scaling;
    StatsRequest stats;
    OutputSpec output;
};

inline void validate(const ExperimentConfig& c)
{
    if (c.ensembles.empty()) throw ConfigError("config has no ensemble");
    if (c.sizes.empty()) throw ConfigError("config needs at least one size");
    if (c.replicas < 1) throw ConfigError("replicas must be >= 1");
    if (c.stats.k_max < 0 || c.stats.k_max > kMaxMomentOrder) {
        throw ConfigError("stats.k_max must lie in [0, 12]");
    }
    if (c.stats.bulk_window && !(*c.stats.bulk_window > 0.0)) {
        throw ConfigError("stats.bulk_window must be positive");
    }
    for (std::size_t n : c.sizes) {
        if (n == 0) throw ConfigError("sizes must be positive");
        if (n > 8192) throw ResourceError("size " + std::to_string(n) + " exceeds the dense limit 8192");
        for (const auto& e : c.ensembles) validate(e, n);
    }
}

//---------------------------------------------------------------------------//
// Text format
//---------------------------------------------------------------------------//
namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double to_double(const std::string& s, const std::string& key)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) throw ConfigError("'" + key + "': not a number: '" + s + "'");
    return v;
}

inline std::uint64_t to_u64(const std::string& s, const std::string& key)
{
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) throw ConfigError("'" + key + "': not an unsigned integer: '" + s + "'");
    return v;
}

inline bool to_bool(const std::string& s, const std::string& key)
{
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ConfigError("'" + key + "': expected true/false, got '" + s + "'");
}

/// Shortest round-trip representation.
inline std::string fmt(double v)
{
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline ScalarDist parse_dist(const std::string& s, const std::string& key)
{
    if (s == "rademacher") return ScalarDist::rademacher();
    if (s == "gaussian") return ScalarDist::gaussian();
    if (s.rfind("two_point:", 0) == 0) return ScalarDist::two_point(to_double(s.substr(10), key));
    throw ConfigError("'" + key + "': unknown distribution '" + s + "'");
}

inline std::string format_dist(const ScalarDist& d)
{
    if (const auto* t = std::get_if<TwoPoint>(&d.variant())) return "two_point:" + fmt(t->t);
    return std::holds_alternative<Rademacher>(d.variant()) ? "rademacher" : "gaussian";
}

inline ProcessSpec parse_process(const std::string& s, const std::string& key)
{
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "iid") return IidProcess{parse_dist(arg, key)};
    if (head == "constant") return ConstantProcess{parse_dist(arg, key)};
    if (head == "markov") return MarkovTwoState{to_double(arg, key)};
    if (head == "ar1") return GaussAR1{to_double(arg, key)};
    throw ConfigError("'" + key + "': unknown process '" + s + "'");
}

inline std::string format_process(const ProcessSpec& p)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using P = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<P, IidProcess>) return "iid:" + format_dist(x.dist);
            else if constexpr (std::is_same_v<P, ConstantProcess>) return "constant:" + format_dist(x.dist);
            else if constexpr (std::is_same_v<P, MarkovTwoState>) return "markov:" + fmt(x.q);
            else return "ar1:" + fmt(x.rho);
        },
        p);
}

inline BandwidthRule parse_bandwidth(const std::string& s, const std::string& key)
{
    const auto parts = split(s, ':');
    if (parts[0] == "fixed" && parts.size() == 2) return FixedBandwidth{to_u64(parts[1], key)};
    if (parts[0] == "linear" && parts.size() == 2) return LinearBandwidth{to_double(parts[1], key)};
    if (parts[0] == "power" && parts.size() == 3) {
        return PowerBandwidth{to_double(parts[1], key), to_double(parts[2], key)};
    }
    throw ConfigError("'" + key + "': bandwidth must be fixed:<b>, linear:<c> or power:<C>:<gamma>");
}

inline std::string format_bandwidth(const BandwidthRule& r)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using R = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<R, FixedBandwidth>) return "fixed:" + std::to_string(x.b);
            else if constexpr (std::is_same_v<R, LinearBandwidth>) return "linear:" + fmt(x.c);
            else return "power:" + fmt(x.C) + ":" + fmt(x.gamma);
        },
        r);
}

inline std::vector<double> parse_list(const std::string& s, const std::string& key)
{
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(to_double(p, key));
    return out;
}

template <class T>
std::string join(const std::vector<T>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>) out += fmt(xs[i]);
        else out += std::to_string(xs[i]);
    }
    return out;
}

/// Pairs written as `w@x, w@x, ...`.
inline std::vector<std::pair<double, double>> parse_weighted(const std::string& s, const std::string& key)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& item : split(s, ',')) {
        const auto at = item.find('@');
        if (at == std::string::npos) throw ConfigError("'" + key + "': expected weight@value, got '" + item + "'");
        out.emplace_back(to_double(trim(item.substr(0, at)), key), to_double(trim(item.substr(at + 1)), key));
    }
    return out;
}

using Fields = std::map<std::string, std::string>;

inline EnsembleSpec parse_ensemble(Fields f, const std::string& prefix)
{
    auto take = [&](const std::string& name) -> std::optional<std::string> {
        auto it = f.find(name);
        if (it == f.end()) return std::nullopt;
        std::string v = it->second;
        f.erase(it);
        return v;
    };
    auto need = [&](const std::string& name) {
        auto v = take(name);
        if (!v) throw ConfigError("missing key '" + prefix + name + "'");
        return *v;
    };
    const std::string kind = need("kind");
    auto dist = [&] {
        const auto d = take("dist");
        return d ? parse_dist(*d, prefix + "dist") : ScalarDist::rademacher();
    };
    EnsembleSpec spec;
    if (kind == "wigner") {
        spec = Wigner{dist()};
    } else if (kind == "band") {
        BandWigner b{dist(), parse_bandwidth(need("bandwidth"), prefix + "bandwidth"), false};
        if (auto p = take("periodic")) b.periodic = to_bool(*p, prefix + "periodic");
        spec = b;
    } else if (kind == "profile") {
        const auto d = dist();
        spec = ProfileBand{d, Profile(parse_list(need("profile.breaks"), prefix + "profile.breaks"),
                                      parse_list(need("profile.values"), prefix + "profile.values"))};
    } else if (kind == "sparse_block") {
        const std::string pat = need("pattern");
        BlockPattern p;
        if (pat == "symmetric") p = BlockPattern::Symmetric;
        else if (pat == "antisymmetric") p = BlockPattern::Antisymmetric;
        else throw ConfigError("'" + prefix + "pattern': expected symmetric or antisymmetric");
        spec = SparseBlock{p, dist()};
    } else if (kind == "diagonal_process") {
        spec = DiagonalProcess{parse_process(need("process"), prefix + "process")};
    } else if (kind == "filled_process") {
        FilledProcess fp{parse_process(need("process"), prefix + "process"), FillingOrder::Diagonal};
        if (auto o = take("filling")) {
            if (*o == "diagonal") fp.order = FillingOrder::Diagonal;
            else if (*o == "row_by_row") fp.order = FillingOrder::RowByRow;
            else throw ConfigError("'" + prefix + "filling': expected diagonal or row_by_row");
        }
        spec = fp;
    } else if (kind == "diagonal_cw") {
        spec = DiagonalCW{to_double(need("beta"), prefix + "beta")};
    } else if (kind == "full_cw") {
        spec = FullCW{to_double(need("beta"), prefix + "beta")};
    } else if (kind == "exchangeable_spin") {
        ExchangeableSpin ex;
        for (auto [w, t] : parse_weighted(need("atoms"), prefix + "atoms")) ex.atoms.push_back({w, t});
        spec = ex;
    } else if (kind == "rank_one") {
        spec = RankOneE{};
    } else {
        throw ConfigError("'" + prefix + "kind': unknown ensemble '" + kind + "'");
    }
    if (!f.empty()) throw ConfigError("unused key '" + prefix + f.begin()->first + "' for ensemble kind " + kind);
    return spec;
}

inline void format_ensemble(std::ostream& os, const EnsembleSpec& spec, const std::string& prefix)
{
    os << prefix << "kind = " << ensemble_kind(spec) << "\n";
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Wigner>) {
                os << prefix << "dist = " << format_dist(s.dist) << "\n";
            } else if constexpr (std::is_same_v<S, BandWigner>) {
                os << prefix << "dist = " << format_dist(s.dist) << "\n"
                   << prefix << "bandwidth = " << format_bandwidth(s.rule) << "\n"
                   << prefix << "periodic = " << (s.periodic ? "true" : "false") << "\n";
            } else if constexpr (std::is_same_v<S, ProfileBand>) {
                os << prefix << "dist = " << format_dist(s.dist) << "\n"
                   << prefix << "profile.breaks = " << join(s.profile.breaks()) << "\n"
                   << prefix << "profile.values = " << join(s.profile.values()) << "\n";
            } else if constexpr (std::is_same_v<S, SparseBlock>) {
                os << prefix << "pattern = "
                   << (s.pattern == BlockPattern::Symmetric ? "symmetric" : "antisymmetric") << "\n"
                   << prefix << "dist = " << format_dist(s.dist) << "\n";
            } else if constexpr (std::is_same_v<S, DiagonalProcess>) {
                os << prefix << "process = " << format_process(s.process) << "\n";
            } else if constexpr (std::is_same_v<S, FilledProcess>) {
                os << prefix << "process = " << format_process(s.process) << "\n"
                   << prefix << "filling = " << (s.order == FillingOrder::Diagonal ? "diagonal" : "row_by_row")
                   << "\n";
            } else if constexpr (std::is_same_v<S, DiagonalCW> || std::is_same_v<S, FullCW>) {
                os << prefix << "beta = " << fmt(s.beta) << "\n";
            } else if constexpr (std::is_same_v<S, ExchangeableSpin>) {
                os << prefix << "atoms = ";
                for (std::size_t i = 0; i < s.atoms.size(); ++i) {
                    os << (i ? ", " : "") << fmt(s.atoms[i].weight) << "@" << fmt(s.atoms[i].tau);
                }
                os << "\n";
            }
        },
        spec);
}

}  // namespace detail

/// One-line description of an ensemble, used as a label in reports.
inline std::string describe(const EnsembleSpec& spec)
{
    std::ostringstream os;
    detail::format_ensemble(os, spec, "");
    std::string s = os.str();
    std::string out;
    for (const auto& line : detail::split(s, '\n')) {
        if (line.empty()) continue;
        if (!out.empty()) out += "; ";
        out += line;
    }
    return out;
}

inline ExperimentConfig parse_config(std::string_view text)
{
    std::map<std::string, std::string> kv;
    std::size_t line_no = 0;
    for (const auto& raw : detail::split(text, '\n')) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line = detail::trim(line.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
    }

    ExperimentConfig c;
    std::map<std::size_t, detail::Fields> ensembles;
    for (const auto& [key, value] : kv) {
        if (key.rfind("ensemble.", 0) == 0) {
            std::string rest = key.substr(9);
            std::size_t idx = 0;
            const auto dot = rest.find('.');
            if (dot != std::string::npos && !rest.empty() &&
                std::all_of(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(dot),
                            [](char ch) { return ch >= '0' && ch <= '9'; })) {
                idx = detail::to_u64(rest.substr(0, dot), key);
                rest = rest.substr(dot + 1);
            }
            ensembles[idx][rest] = value;
        } else if (key == "name") {
            c.name = value;
        } else if (key == "seed") {
            c.seed = detail::to_u64(value, key);
        } else if (key == "sizes") {
            for (const auto& s : detail::split(value, ',')) c.sizes.push_back(detail::to_u64(s, key));
        } else if (key == "replicas") {
            c.replicas = detail::to_u64(value, key);
        } else if (key == "scaling") {
            if (value == "auto") c.scaling = {ScalingKind::Auto, 0.0};
            else if (value == "inv_sqrt_n") c.scaling = {ScalingKind::InvSqrtN, 0.0};
            else if (value == "inv_n") c.scaling = {ScalingKind::InvN, 0.0};
            else if (value.rfind("power:", 0) == 0) c.scaling = {ScalingKind::Power, detail::to_double(value.substr(6), key)};
            else if (value.rfind("const:", 0) == 0) c.scaling = {ScalingKind::Constant, detail::to_double(value.substr(6), key)};
            else throw ConfigError("'scaling': expected auto, inv_sqrt_n, inv_n, power:<g> or const:<c>");
        } else if (key == "stats.k_max") {
            c.stats.k_max = static_cast<int>(detail::to_u64(value, key));
        } else if (key == "stats.ks_law") {
            if (value == "auto") c.stats.ks_law = {};
            else if (value == "none") c.stats.ks_law = {LawSpec::Kind::None, {}};
            else if (value.rfind("semicircle:", 0) == 0) {
                c.stats.ks_law = {LawSpec::Kind::Mixture, {{1.0, detail::to_double(value.substr(11), key)}}};
            } else if (value.rfind("mixture:", 0) == 0) {
                LawSpec law{LawSpec::Kind::Mixture, {}};
                for (auto [w, v] : detail::parse_weighted(value.substr(8), key)) law.components.push_back({w, v});
                c.stats.ks_law = law;
            } else {
                throw ConfigError("'stats.ks_law': expected auto, none, semicircle:<v> or mixture:<w@v,...>");
            }
        } else if (key == "stats.op_norm") {
            c.stats.op_norm = detail::to_bool(value, key);
        } else if (key == "stats.second_norm") {
            c.stats.second_norm = detail::to_bool(value, key);
        } else if (key == "stats.bulk_window") {
            c.stats.bulk_window = detail::to_double(value, key);
        } else if (key == "output.dir") {
            c.output.dir = value;
        } else if (key == "output.formats") {
            c.output.json = c.output.csv = c.output.svg = false;
            for (const auto& f : detail::split(value, ',')) {
                if (f == "json") c.output.json = true;
                else if (f == "csv") c.output.csv = true;
                else if (f == "svg") c.output.svg = true;
                else throw ConfigError("'output.formats': unknown format '" + f + "'");
            }
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    std::size_t expect = 0;
    for (auto& [idx, fields] : ensembles) {
        if (idx != expect++) throw ConfigError("ensemble indices must be 0, 1, 2, ... without gaps");
        c.ensembles.push_back(detail::parse_ensemble(fields, "ensemble." + std::to_string(idx) + "."));
    }
    if (c.stats.ks_law.kind == LawSpec::Kind::Mixture) (void)MixtureSC(c.stats.ks_law.components);
    validate(c);
    return c;
}

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
inline std::string to_config_text(const ExperimentConfig& c)
{
    std::ostringstream os;
    os << "name = " << c.name << "\n"
       << "seed = " << c.seed << "\n"
       << "sizes = " << detail::join(c.sizes) << "\n"
       << "replicas = " << c.replicas << "\n";
    os << "scaling = ";
    switch (c.scaling.kind) {
        case ScalingKind::Auto: os << "auto"; break;
        case ScalingKind::InvSqrtN: os << "inv_sqrt_n"; break;
        case ScalingKind::InvN: os << "inv_n"; break;
        case ScalingKind::Power: os << "power:" << detail::fmt(c.scaling.value); break;
        case ScalingKind::Constant: os << "const:" << detail::fmt(c.scaling.value); break;
    }
    os << "\nstats.k_max = " << c.stats.k_max << "\nstats.ks_law = ";
    switch (c.stats.ks_law.kind) {
        case LawSpec::Kind::Auto: os << "auto"; break;
        case LawSpec::Kind::None: os << "none"; break;
        case LawSpec::Kind::Mixture:
            os << "mixture:";
            for (std::size_t i = 0; i < c.stats.ks_law.components.size(); ++i) {
                const auto& p = c.stats.ks_law.components[i];
                os << (i ? ", " : "") << detail::fmt(p.weight) << "@" << detail::fmt(p.variance);
            }
            break;
    }
    os << "\nstats.op_norm = " << (c.stats.op_norm ? "true" : "false")
       << "\nstats.second_norm = " << (c.stats.second_norm ? "true" : "false") << "\n";
    if (c.stats.bulk_window) os << "stats.bulk_window = " << detail::fmt(*c.stats.bulk_window) << "\n";
    os << "output.dir = " << c.output.dir << "\noutput.formats = ";
    std::vector<std::string> fm;
    if (c.output.json) fm.emplace_back("json");
    if (c.output.csv) fm.emplace_back("csv");
    if (c.output.svg) fm.emplace_back("svg");
    for (std::size_t i = 0; i < fm.size(); ++i) os << (i ? "," : "") << fm[i];
    os << "\n";
    for (std::size_t e = 0; e < c.ensembles.size(); ++e) {
        detail::format_ensemble(os, c.ensembles[e], "ensemble." + std::to_string(e) + ".");
    }
    return os.str();
}

/// FNV-1a hash of the canonical text, as 16 hex digits.  Output settings
/// are excluded so the hash identifies the experiment, not where it was written.
inline std::string config_hash(const ExperimentConfig& c)
{
    ExperimentConfig k = c;
    k.output = OutputSpec{};
    const std::string text = to_config_text(k);
    const std::uint64_t h = rmtlab::detail::fnv1a(text);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[15 - i] = hex[(h >> (4 * i)) & 0xf];
    return out;
}

}  // namespace rmtlab::harness
