// SPDX-License-Identifier: Apache-2.0
//
// rmtlab: run spectral experiments from a config file or a named preset.
//
// Exit codes: 0 success, 2 bad configuration or arguments, 3 numerical
// failure, 4 I/O failure.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rmtlab/errors.hpp"
#include "rmtlab/harness/config.hpp"
#include "rmtlab/harness/presets.hpp"
#include "rmtlab/harness/report.hpp"
#include "rmtlab/harness/runner.hpp"

namespace {

using namespace rmtlab;
using namespace rmtlab::harness;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_summary(const RunReport& rep)
{
    std::cout << "config " << rep.meta.config_hash << "  seed " << rep.meta.seed << "\n";
    for (const auto& r : rep.results) {
        std::cout << "[" << r.ensemble_index << "] " << r.ensemble << "\n  N=" << r.N << " R=" << r.replicas;
        for (const auto& m : r.moments) {
            if (m.k % 2 == 0) std::cout << "  m" << m.k << "=" << m.mean << "(" << m.stderr_ << ")";
        }
        if (r.ks) std::cout << "  ks=" << r.ks->mean;
        if (r.op_norm) std::cout << "  |X|=" << r.op_norm->mean;
        if (r.second_norm) std::cout << "  s2=" << r.second_norm->mean;
        if (r.outliers > 0) std::cout << "  outliers=" << r.outliers;
        std::cout << "  (" << r.wall_clock_s << " s)\n";
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral experiments on random matrix ensembles"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir, formats;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicas;
    std::vector<std::size_t> sizes;
    unsigned threads = 1;
    bool quiet = false;

    auto* run_cmd = app.add_subcommand("run", "run an experiment and write its report");
    auto* src = run_cmd->add_option_group("source");
    src->add_option("--config", config_path, "experiment config file");
    src->add_option("--preset", preset_name, "named preset (see `presets`)");
    src->require_option(1);
    run_cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");
    run_cmd->add_option("--seed", seed, "master seed (overrides seed)");
    run_cmd->add_option("--replicas", replicas, "replicas per size (overrides replicas)");
    run_cmd->add_option("--sizes", sizes, "matrix sizes (overrides sizes)")->delimiter(',');
    run_cmd->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
    run_cmd->add_option("--formats", formats, "comma list of json, csv, svg (overrides output.formats)");
    run_cmd->add_flag("--quiet", quiet, "do not print the summary");

    auto* list_cmd = app.add_subcommand("presets", "list the available presets");
    std::string show_name;
    auto* show_cmd = app.add_subcommand("show", "print a preset in config form");
    show_cmd->add_option("name", show_name, "preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*list_cmd) {
            for (const auto& p : presets()) std::cout << p.name << "\n    " << p.summary << "\n";
            return 0;
        }
        if (*show_cmd) {
            std::cout << to_config_text(preset(show_name));
            return 0;
        }

        ExperimentConfig cfg = preset_name.empty() ? parse_config(read_file(config_path)) : preset(preset_name);
        if (seed) cfg.seed = *seed;
        if (replicas) cfg.replicas = *replicas;
        if (!sizes.empty()) cfg.sizes = sizes;
        if (!out_dir.empty()) cfg.output.dir = out_dir;
        if (!formats.empty()) {
            std::string text = to_config_text(cfg);
            const auto pos = text.find("output.formats = ");
            const auto end = text.find('\n', pos);
            text.replace(pos, end - pos, "output.formats = " + formats);
            cfg = parse_config(text);
        }
        validate(cfg);

        RunOptions opt;
        opt.threads = threads;
        opt.keep_spectra = cfg.output.csv || cfg.output.svg;
        const auto outcome = run(cfg, opt);
        const auto files = write_outputs(cfg, outcome);
        if (!quiet) {
            print_summary(outcome.report);
            for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
