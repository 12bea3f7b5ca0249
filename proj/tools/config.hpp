#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <trapgate/force_design.hpp>
#include <trapgate/schrodinger.hpp>

namespace trapgate::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value settings of one experiment. Durations in microseconds,
// frequencies in MHz, wavenumbers in 1/m.
struct ExperimentConfig {
  std::string species1 = "Be9";
  std::string species2 = "Be9";
  double mass1_amu = 9.0;
  double mass2_amu = 9.0;
  double omega1_mhz = 2.0;  // omega1 / 2 pi
  std::vector<double> tf_us{0.5};
  std::optional<double> gamma;
  InversionVariant variant = InversionVariant::stretch_ansatz;
  bool negative_branch = false;
  double c1 = -1.0;
  double c2 = -1.0;
  double guard_band = 0.01;

  ForceKind force_model = ForceKind::homogeneous;
  int periods = 8;
  std::optional<double> dk_per_m;
  int grid = 256;
  int dt_divisor = 4096;
  int fock = 0;
  bool converge = false;
  int snapshot_interval = 0;

  bool simulate = true;  // sweep: run the simulator at every point
  int samples = 1001;    // force curve samples
  int threads = 0;       // 0: hardware concurrency
  std::string out = "out";

  // one "key = value" line per setting, in a fixed order; the hash input
  std::string canonical() const;
  std::string hash() const;
};

// Reads a key = value file; '#' starts a comment. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

// "0.3,0.5,1" or "start:stop:count" (inclusive, linear). Strictly increasing.
std::vector<double> parse_duration_list(const std::string& text);

IonPair make_ions(const ExperimentConfig& config);
GateDesign make_design(const ExperimentConfig& config, double tf_us);
ForceModel make_force_model(const ExperimentConfig& config, const TwoIonSystem& system);

}  // namespace trapgate::cli
