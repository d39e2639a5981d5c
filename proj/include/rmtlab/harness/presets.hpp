// SPDX-License-Identifier: Apache-2.0
//
// Named experiment presets, stored in the config text format.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rmtlab/errors.hpp"
#include "rmtlab/harness/config.hpp"

namespace rmtlab::harness {

struct Preset {
    const char* name;
    const char* summary;
    const char* text;
};

inline const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = {
        {"wigner-semicircle", "Rademacher Wigner matrices against the standard semicircle",
         R"(sizes = 1024
replicas = 20
stats.k_max = 4
ensemble.kind = wigner
ensemble.dist = rademacher
)"},
        {"wigner-norm", "operator norm of Rademacher Wigner matrices",
         R"(sizes = 2048
replicas = 10
stats.k_max = 2
ensemble.kind = wigner
ensemble.dist = rademacher
)"},
        {"band-sub-linear", "non-periodic band with b = ceil(N^0.6)",
         R"(sizes = 2048
replicas = 5
ensemble.kind = band
ensemble.bandwidth = power:1:0.6
ensemble.periodic = false
)"},
        {"band-linear-nonperiodic", "non-periodic band with b = N/8; the limit is not a semicircle",
         R"(sizes = 2048
replicas = 10
stats.ks_law = none
ensemble.kind = band
ensemble.bandwidth = linear:0.125
ensemble.periodic = false
)"},
        {"band-periodic", "periodic band with b = N/8",
         R"(sizes = 2048
replicas = 5
ensemble.kind = band
ensemble.bandwidth = linear:0.125
ensemble.periodic = true
)"},
        {"profile-catalano-pair", "periodic and non-periodic band profiles with c = 1/4",
         R"(sizes = 2048
replicas = 5
ensemble.0.kind = profile
ensemble.0.profile.breaks = 0, 0.25, 0.75, 1
ensemble.0.profile.values = 1, 0, 1
ensemble.1.kind = profile
ensemble.1.profile.breaks = 0, 0.25, 1
ensemble.1.profile.values = 1, 0
)"},
        {"sparse-blocks", "2x2 block matrices built from two Wigner matrices",
         R"(sizes = 2048
replicas = 3
ensemble.0.kind = sparse_block
ensemble.0.pattern = antisymmetric
ensemble.1.kind = sparse_block
ensemble.1.pattern = symmetric
)"},
        {"toeplitz", "random Toeplitz matrices (one sign per diagonal)",
         R"(sizes = 1024
replicas = 20
stats.ks_law = none
ensemble.kind = diagonal_process
ensemble.process = constant:rademacher
)"},
        {"ar1-diagonals", "Gaussian AR(1) along each diagonal, rho = 0.5",
         R"(sizes = 1024
replicas = 5
ensemble.kind = diagonal_process
ensemble.process = ar1:0.5
)"},
        {"markov-diagonal-filling", "two-state Markov chain laid along the diagonal filling",
         R"(sizes = 1024
replicas = 5
ensemble.kind = filled_process
ensemble.process = markov:0.25
ensemble.filling = diagonal
)"},
        {"cw-diagonal-sweep", "independent Curie-Weiss vectors per diagonal, beta = 0.5, 1, 2",
         R"(sizes = 1024
replicas = 5
ensemble.0.kind = diagonal_cw
ensemble.0.beta = 0.5
ensemble.1.kind = diagonal_cw
ensemble.1.beta = 1
ensemble.2.kind = diagonal_cw
ensemble.2.beta = 2
)"},
        {"cw-full-sweep", "one Curie-Weiss draw of N^2 spins per matrix, beta = 0.5, 1, 2",
         R"(sizes = 1024
replicas = 5
stats.bulk_window = 3
ensemble.0.kind = full_cw
ensemble.0.beta = 0.5
ensemble.1.kind = full_cw
ensemble.1.beta = 1
ensemble.2.kind = full_cw
ensemble.2.beta = 2
)"},
        {"cw-norm-sweep", "largest eigenvalue over N for full Curie-Weiss matrices",
         R"(sizes = 256, 512, 1024, 2048
replicas = 4
stats.k_max = 2
stats.ks_law = none
ensemble.0.kind = full_cw
ensemble.0.beta = 0.5
ensemble.1.kind = full_cw
ensemble.1.beta = 1
ensemble.2.kind = full_cw
ensemble.2.beta = 2
)"},
        {"exchangeable-mixture", "exchangeable spins with tau in {0, 0.8}; bulk against a semicircle mixture",
         R"(sizes = 1024
replicas = 20
stats.bulk_window = 3
ensemble.kind = exchangeable_spin
ensemble.atoms = 0.5@0, 0.5@0.8
)"},
        {"rank-one", "the all-ones matrix: one eigenvalue N, the rest 0",
         R"(sizes = 100
replicas = 1
stats.ks_law = none
ensemble.kind = rank_one
)"},
    };
    return all;
}

inline std::string preset_names()
{
    std::string out;
    for (const auto& p : presets()) out += (out.empty() ? "" : ", ") + std::string(p.name);
    return out;
}

inline const Preset& find_preset(std::string_view name)
{
    for (const auto& p : presets()) {
        if (name == p.name) return p;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'; available: " + preset_names());
}

inline ExperimentConfig preset(std::string_view name)
{
    const auto& p = find_preset(name);
    auto cfg = parse_config(p.text);
    cfg.name = p.name;
    return cfg;
}

}  // namespace rmtlab::harness
