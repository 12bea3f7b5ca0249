#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <trapgate/errors.hpp>
#include <trapgate/version.hpp>

#include "commands.hpp"

using namespace trapgate;
using namespace trapgate::cli;

int main(int argc, char** argv) {
  CLI::App app{"Fast two-ion phase gates: force design, phase analysis and exact simulation"};
  app.set_version_flag("--version", std::string(trapgate::version));
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::vector<std::pair<std::string, std::string>> overrides;
  } flags;

  // flags map onto config keys and are applied after the config file, in order
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "key = value configuration file");
    auto setting = [&](const char* flag, const char* key, const char* help) {
      cmd->add_option_function<std::string>(
          flag, [&flags, key](const std::string& v) { flags.overrides.emplace_back(key, v); }, help);
    };
    setting("--out", "out", "output directory");
    setting("--grid", "grid", "grid points per axis (power of two)");
    setting("--dt-divisor", "dt_divisor", "time steps per gate");
    setting("--force-model", "force_model", "homogeneous or sinusoidal");
    setting("--periods", "periods", "sine periods between the ions (4 or 8)");
    setting("--tf", "tf_us", "gate durations in us: a,b,c or start:stop:count");
    setting("--species", "species", "ion species, lighter first, e.g. Be9,Mg25");
    setting("--fock", "fock", "stretch-mode Fock level of the initial state");
    cmd->add_flag_function(
        "--converge", [&flags](std::int64_t) { flags.overrides.emplace_back("converge", "true"); },
        "halve dt until the differential phase converges");
    cmd->add_option_function<std::vector<std::string>>(
        "--set",
        [&flags](const std::vector<std::string>& kv) {
          for (const auto& s : kv) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value");
            flags.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
          }
        },
        "any configuration key, key=value");
  };

  auto* design = app.add_subcommand("design", "force curves, design JSON and max|F| table");
  auto* simulate = app.add_subcommand("simulate", "split-operator verification of the gate");
  auto* sweep = app.add_subcommand("sweep", "parallel sweep over gate durations");
  auto* verify = app.add_subcommand("verify", "analytic identity checks without the simulator");
  for (auto* cmd : {design, simulate, sweep, verify}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  ExperimentConfig config;
  try {
    if (!flags.config.empty()) config = load_config(flags.config);
    for (const auto& [k, v] : flags.overrides) apply_setting(config, k, v);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config;
  }

  try {
    if (design->parsed()) return run_design(config);
    if (simulate->parsed()) return run_simulate(config);
    if (sweep->parsed()) return run_sweep(config);
    return run_verify(config);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    if (is_design_error(e.code())) return exit_design;
    return e.code() == Errc::invalid_argument ? exit_config : exit_simulation;
  }
}
