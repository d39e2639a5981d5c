// SPDX-License-Identifier: Apache-2.0
//
// Report serialization: JSON summaries, per-replica CSV spectra and SVG
// histograms with the reference law overlaid.
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmtlab/errors.hpp"
#include "rmtlab/harness/config.hpp"
#include "rmtlab/harness/runner.hpp"
#include "rmtlab/laws.hpp"
#include "rmtlab/spectra.hpp"

namespace rmtlab::harness {

using nlohmann::json;

inline json to_json(const RunReport& rep)
{
    json results = json::array();
    for (const auto& r : rep.results) {
        json moments = json::array();
        for (const auto& m : r.moments) moments.push_back({{"k", m.k}, {"mean", m.mean}, {"stderr", m.stderr_}});
        json j = {
            {"ensemble_index", r.ensemble_index},
            {"ensemble", r.ensemble},
            {"N", r.N},
            {"replicas", r.replicas},
            {"scale", r.scale},
            {"moments", moments},
            {"ks", nullptr},
            {"op_norm", nullptr},
            {"op_norm_over_n", nullptr},
            {"second_norm", nullptr},
            {"outliers", r.outliers},
            {"invariants_checked", r.invariants_checked},
            {"wall_clock_s", r.wall_clock_s},
        };
        if (r.ks) j["ks"] = {{"law", r.ks->law}, {"mean", r.ks->mean}, {"stderr", r.ks->stderr_}};
        if (r.op_norm) j["op_norm"] = {{"mean", r.op_norm->mean}, {"min", r.op_norm->min}, {"max", r.op_norm->max}};
        if (r.op_norm_over_n) {
            j["op_norm_over_n"] = {
                {"mean", r.op_norm_over_n->mean}, {"min", r.op_norm_over_n->min}, {"max", r.op_norm_over_n->max}};
        }
        if (r.second_norm) j["second_norm"] = {{"mean", r.second_norm->mean}, {"stderr", r.second_norm->stderr_}};
        results.push_back(std::move(j));
    }
    return {
        {"meta",
         {{"seed", rep.meta.seed},
          {"config_hash", rep.meta.config_hash},
          {"version", rep.meta.version},
          {"name", rep.meta.name}}},
        {"results", results},
    };
}

inline RunReport report_from_json(const json& j)
{
    try {
        RunReport rep;
        const auto& meta = j.at("meta");
        rep.meta.seed = meta.at("seed").get<std::uint64_t>();
        rep.meta.config_hash = meta.at("config_hash").get<std::string>();
        rep.meta.version = meta.at("version").get<std::string>();
        rep.meta.name = meta.value("name", std::string{});
        for (const auto& r : j.at("results")) {
            SizeResult s;
            s.ensemble_index = r.value("ensemble_index", std::size_t{0});
            s.ensemble = r.value("ensemble", std::string{});
            s.N = r.at("N").get<std::size_t>();
            s.replicas = r.at("replicas").get<std::size_t>();
            s.scale = r.value("scale", 1.0);
            for (const auto& m : r.at("moments")) {
                s.moments.push_back({m.at("k").get<int>(), m.at("mean").get<double>(), m.at("stderr").get<double>()});
            }
            if (const auto& k = r.at("ks"); !k.is_null()) {
                s.ks = KsStat{k.at("law").get<std::string>(), k.at("mean").get<double>(), k.at("stderr").get<double>()};
            }
            auto range = [](const json& x) {
                return RangeStat{x.at("mean").get<double>(), x.at("min").get<double>(), x.at("max").get<double>()};
            };
            if (const auto& o = r.at("op_norm"); !o.is_null()) s.op_norm = range(o);
            if (r.contains("op_norm_over_n") && !r["op_norm_over_n"].is_null()) {
                s.op_norm_over_n = range(r["op_norm_over_n"]);
            }
            if (const auto& o = r.at("second_norm"); !o.is_null()) {
                s.second_norm = MeanErr{o.at("mean").get<double>(), o.at("stderr").get<double>()};
            }
            s.outliers = r.value("outliers", 0.0);
            s.invariants_checked = r.value("invariants_checked", std::size_t{0});
            s.wall_clock_s = r.value("wall_clock_s", 0.0);
            rep.results.push_back(std::move(s));
        }
        return rep;
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed report: ") + ex.what());
    }
}

//---------------------------------------------------------------------------//
// Files
//---------------------------------------------------------------------------//
namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline std::string num(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::string px(double v)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

}  // namespace detail

/// One column "lambda", one scaled eigenvalue per row, ascending.
inline std::string spectrum_csv(const std::vector<double>& eigenvalues)
{
    std::string out = "lambda\n";
    for (double x : eigenvalues) out += detail::num(x) + "\n";
    return out;
}

inline std::vector<double> parse_spectrum_csv(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || detail::trim(line) != "lambda") throw IoError("spectrum CSV lacks 'lambda' header");
    std::vector<double> xs;
    while (std::getline(is, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        try {
            xs.push_back(detail::to_double(line, "lambda"));
        } catch (const ConfigError&) {
            throw IoError("spectrum CSV: bad value '" + line + "'");
        }
    }
    return xs;
}

/// SVG 1.1 histogram of a pooled sample on [-window, window] with the
/// density of `law` drawn on top and the count outside the window noted.
inline std::string histogram_svg(const std::vector<double>& sample, double window,
                                 const std::optional<MixtureSC>& law, const std::string& title)
{
    constexpr double W = 640, H = 400, ml = 50, mr = 20, mt = 40, mb = 40;
    const Esd esd(sample);
    const Histogram h = histogram(esd, -window, window);
    double ymax = 0.0;
    for (double d : h.densities) ymax = std::max(ymax, d);
    std::vector<double> curve;
    constexpr int kCurve = 400;
    if (law) {
        for (int i = 0; i <= kCurve; ++i) {
            const double x = -window + 2.0 * window * i / kCurve;
            curve.push_back(law->pdf(x));
            ymax = std::max(ymax, curve.back());
        }
    }
    if (!(ymax > 0.0)) ymax = 1.0;
    ymax *= 1.05;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto sx = [&](double x) { return ml + (x + window) / (2.0 * window) * pw; };
    auto sy = [&](double y) { return mt + ph - y / ymax * ph; };

    std::ostringstream os;
    os << R"(<?xml version="1.0" encoding="UTF-8"?>)" << "\n"
       << R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width=")" << W << R"(" height=")" << H << R"(">)"
       << "\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << title << "</text>\n<g fill=\"#9ab\" stroke=\"#567\" stroke-width=\"0.5\">\n";
    for (std::size_t b = 0; b < h.densities.size(); ++b) {
        const double x0 = sx(h.edges[b]), x1 = sx(h.edges[b + 1]);
        const double y = sy(h.densities[b]);
        os << "<rect x=\"" << detail::px(x0) << "\" y=\"" << detail::px(y) << "\" width=\""
           << detail::px(x1 - x0) << "\" height=\"" << detail::px(mt + ph - y) << "\"/>\n";
    }
    os << "</g>\n";
    if (law) {
        os << "<path fill=\"none\" stroke=\"#c22\" stroke-width=\"1.5\" d=\"";
        for (int i = 0; i <= kCurve; ++i) {
            const double x = -window + 2.0 * window * i / kCurve;
            os << (i ? "L" : "M") << detail::px(sx(x)) << "," << detail::px(sy(curve[static_cast<std::size_t>(i)]))
               << " ";
        }
        os << "\"/>\n";
    }
    // Axes with ticks at integer positions.
    os << "<g stroke=\"black\" stroke-width=\"1\">\n"
       << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\"" << mt + ph << "\"/>\n"
       << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph << "\"/>\n</g>\n"
       << "<g font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n";
    const double step = window > 6 ? std::ceil(window / 5) : 1.0;
    for (double t = -std::floor(window / step) * step; t <= window + 1e-12; t += step) {
        os << "<text x=\"" << detail::px(sx(t)) << "\" y=\"" << mt + ph + 16 << "\">" << t << "</text>\n";
    }
    os << "</g>\n";
    const std::size_t outside = h.below + h.above;
    if (outside > 0) {
        os << "<text x=\"" << ml + pw << "\" y=\"" << mt + 12
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#c22\">" << outside
           << " outlier" << (outside == 1 ? "" : "s") << " beyond |x| &gt; " << window << " (" << h.below
           << " left, " << h.above << " right)</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Plot window for a spectrum: the bulk window when set, else 1.25 times the
/// law's support radius, else the sample range.
inline double plot_window(const ExperimentConfig& cfg, const std::optional<MixtureSC>& law,
                          const std::vector<double>& sample)
{
    if (cfg.stats.bulk_window) return *cfg.stats.bulk_window;
    if (law && law->support_radius() > 0.0) return 1.25 * law->support_radius();
    double r = 0.0;
    for (double x : sample) r = std::max(r, std::abs(x));
    return r > 0.0 ? 1.05 * r : 1.0;
}

/// Write the requested formats under cfg.output.dir (or `dir` when given)
/// and return the paths written.
inline std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& cfg, const RunOutcome& out,
                                                        std::optional<std::filesystem::path> dir = {})
{
    namespace fs = std::filesystem;
    const fs::path root = dir ? *dir : fs::path(cfg.output.dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError("cannot create output directory '" + root.string() + "': " + ec.message());
    std::vector<fs::path> written;
    if (cfg.output.json) {
        const auto p = root / "report.json";
        detail::write_text(p, to_json(out.report).dump(2) + "\n");
        written.push_back(p);
    }
    if (cfg.output.csv) {
        for (const auto& s : out.spectra) {
            const auto p = root / "spectra" /
                           ("e" + std::to_string(s.ensemble_index) + "_N" + std::to_string(s.N) + "_r" +
                            std::to_string(s.replica) + ".csv");
            detail::write_text(p, spectrum_csv(s.eigenvalues));
            written.push_back(p);
        }
    }
    if (cfg.output.svg) {
        for (std::size_t e = 0; e < cfg.ensembles.size(); ++e) {
            const auto law = resolve_law(cfg.stats.ks_law, cfg.ensembles[e]);
            for (std::size_t N : cfg.sizes) {
                std::vector<double> pooled;
                for (const auto& s : out.spectra) {
                    if (s.ensemble_index == e && s.N == N) pooled.insert(pooled.end(), s.eigenvalues.begin(), s.eigenvalues.end());
                }
                if (pooled.empty()) continue;
                const double w = plot_window(cfg, law, pooled);
                const auto p = root / ("histogram_e" + std::to_string(e) + "_N" + std::to_string(N) + ".svg");
                const std::string title = ensemble_kind(cfg.ensembles[e]) + ", N = " + std::to_string(N) +
                                          (law ? ", law " + law_label(*law) : std::string{});
                detail::write_text(p, histogram_svg(pooled, w, law, title));
                written.push_back(p);
            }
        }
    }
    return written;
}

}  // namespace rmtlab::harness
