#pragma once

#include <trapgate/force_design.hpp>
#include <trapgate/normal_modes.hpp>
#include <trapgate/units.hpp>

namespace trapgate::testing {

inline constexpr double two_mhz = 2.0 * pi * 2e6;

inline IonPair beryllium_pair() { return IonPair::from_amu(9, 9, two_mhz); }
inline IonPair beryllium_magnesium() { return IonPair::from_amu(9, 25, two_mhz); }

inline double natural_time(const IonPair& ions, double microseconds) {
  return microseconds * 1e-6 / ions.units().time;
}

}  // namespace trapgate::testing
