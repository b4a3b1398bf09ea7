#pragma once

#include <ostream>

#include "landaulab/config.hpp"

namespace landaulab {

// Executes one experiment config, writing CSV/JSON into cfg.output_dir.
// Returns 0 on success; in verify mode, the number of failed criteria.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

} // namespace landaulab
