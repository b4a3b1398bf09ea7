#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landaulab/errors.hpp"

namespace landaulab {

// One config file per run; key = value lines with dotted section prefixes,
// '#' comments, comma-separated lists. Unknown keys are rejected.
struct ExperimentConfig {
    std::string mode; // predict | sample-flat | torus-spectrum | torus-ensemble | verify

    // model block
    int model_n = 1;
    std::vector<double> model_a{1.0};
    double model_V = 0.0;

    // window block
    std::optional<double> window_alpha;
    std::optional<double> window_beta;
    double window_margin = 0.0; // 0 -> module default

    // flat block
    double flat_box_radius = 8.0;
    double flat_grid_step = 0.25;
    std::vector<int> flat_p{1};
    long flat_max_nodes = 20000;
    bool flat_jitter = false;

    // torus block
    int torus_M = 32;
    std::vector<int> torus_p{4};
    double torus_V = 0.0;

    // stats block
    std::string stats_f = "gaussian-bump";
    std::vector<double> stats_f_params{1.0};
    int stats_n_samples = 1000;
    std::uint64_t stats_base_seed = 1;

    std::string output_dir = "out";

    std::uint64_t config_hash = 0; // FNV-1a of the raw file bytes
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a_hash(const std::string& bytes);

} // namespace landaulab
