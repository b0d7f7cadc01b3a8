#pragma once

#include "config.hpp"

namespace wavkan::cli {

// Each command writes its artifacts into cfg.output_dir: config.json, the
// command's CSV files (each opening with a '#' header that echoes the
// resolved config) and metrics.json.

void cmd_fit(const ExperimentConfig& cfg);
void cmd_ntk_sweep(const ExperimentConfig& cfg);
void cmd_hidden_sweep(const ExperimentConfig& cfg);
void cmd_bound_grid(const ExperimentConfig& cfg);
void cmd_dynamics_check(const ExperimentConfig& cfg);
void cmd_pinn(const ExperimentConfig& cfg);

void run(const ExperimentConfig& cfg);

}  // namespace wavkan::cli
