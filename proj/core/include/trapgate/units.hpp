#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace trapgate {

struct PhysicalConstants {
  double hbar;              // J s
  double coulomb_constant;  // e^2 / (4 pi eps0), N m^2
  double atomic_mass_unit;  // kg

  static PhysicalConstants codata2018();
};

// Conversion factors from natural units (hbar = m1 = omega1 = 1) to SI.
struct Units {
  double length;  // m
  double time;    // s
  double mass;    // kg
  double energy;  // J

  double force() const { return energy / length; }
  // Mass-weighted coordinates carry sqrt(kg) m.
  double mode_coordinate() const;
  double mode_force() const;
  double angular_frequency() const { return 1.0 / time; }
  double wavenumber() const { return 1.0 / length; }
};

struct Species {
  std::string_view name;
  double mass_amu;
};

std::span<const Species> known_species();
// Accepts "Be", "Be9", "9Be" style names, case-insensitive.
std::optional<Species> find_species(std::string_view name);

inline constexpr double pi = 3.14159265358979323846;

}  // namespace trapgate
