#pragma once

#include "config.hpp"

namespace trapgate::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_verify_failed = 1,
  exit_config = 2,
  exit_design = 3,
  exit_simulation = 4,
};

int run_design(const ExperimentConfig& config);
int run_simulate(const ExperimentConfig& config);
int run_sweep(const ExperimentConfig& config);
int run_verify(const ExperimentConfig& config);

}  // namespace trapgate::cli
