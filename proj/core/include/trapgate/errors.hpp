#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trapgate {

enum class Errc {
  invalid_argument,
  invalid_duration,
  non_real_coefficient,
  critical_time_proximity,
  degenerate_modes,
  degenerate_ratio,
  non_real_scaling,
  out_of_range,
  quadrature_failure,
  boundary_violation,
  grid_too_narrow,
  no_convergence,
  norm_drift,
  boundary_leak,
  grid_mismatch,
  io_failure,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Errors a caller fixes by picking different gate parameters (duration, sign, ratio).
bool is_design_error(Errc code);
// Errors raised while integrating the Schrödinger equation on a grid.
bool is_simulation_error(Errc code);

}  // namespace trapgate
