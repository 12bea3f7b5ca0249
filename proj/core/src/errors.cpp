#include "trapgate/errors.hpp"

namespace trapgate {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_duration: return "invalid duration";
    case Errc::non_real_coefficient: return "non-real coefficient";
    case Errc::critical_time_proximity: return "critical time proximity";
    case Errc::degenerate_modes: return "degenerate modes";
    case Errc::degenerate_ratio: return "degenerate force ratio";
    case Errc::non_real_scaling: return "non-real scaling";
    case Errc::out_of_range: return "out of range";
    case Errc::quadrature_failure: return "quadrature failure";
    case Errc::boundary_violation: return "boundary violation";
    case Errc::grid_too_narrow: return "grid too narrow";
    case Errc::no_convergence: return "no convergence";
    case Errc::norm_drift: return "norm drift";
    case Errc::boundary_leak: return "boundary leak";
    case Errc::grid_mismatch: return "grid mismatch";
    case Errc::io_failure: return "i/o failure";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool is_design_error(Errc code) {
  switch (code) {
    case Errc::invalid_duration:
    case Errc::non_real_coefficient:
    case Errc::critical_time_proximity:
    case Errc::degenerate_modes:
    case Errc::degenerate_ratio:
    case Errc::non_real_scaling:
      return true;
    default:
      return false;
  }
}

bool is_simulation_error(Errc code) {
  switch (code) {
    case Errc::grid_too_narrow:
    case Errc::no_convergence:
    case Errc::norm_drift:
    case Errc::boundary_leak:
    case Errc::grid_mismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace trapgate
