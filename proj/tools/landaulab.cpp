#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "landaulab/config.hpp"
#include "landaulab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"landaulab: determinantal point processes from Landau-level projections"};

    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;

    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--output", output_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "base seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--jobs", jobs, "worker cap for multi-p runs")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        landaulab::ExperimentConfig cfg = landaulab::load_config(config_path);
        if (const char* env = std::getenv("LANDAULAB_OUTPUT"); env && *env)
            cfg.output_dir = env;
        if (!output_dir.empty()) cfg.output_dir = output_dir; // flag beats env
        if (seed_set) cfg.stats_base_seed = seed;
        if (jobs > 1)
            std::cerr << "note: runs execute sequentially; --jobs caps nothing here\n";
        return landaulab::run_experiment(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
