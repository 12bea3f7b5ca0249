#include "trapgate/units.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

namespace trapgate {

PhysicalConstants PhysicalConstants::codata2018() {
  constexpr double e = 1.602176634e-19;
  constexpr double eps0 = 8.8541878128e-12;
  return {1.054571817e-34, e * e / (4.0 * pi * eps0), 1.66053906660e-27};
}

double Units::mode_coordinate() const { return std::sqrt(mass) * length; }

double Units::mode_force() const { return std::sqrt(mass) * length / (time * time); }

namespace {

constexpr std::array<Species, 6> table{{
    {"Be9", 9.0},
    {"Mg24", 24.0},
    {"Mg25", 25.0},
    {"Ca40", 40.0},
    {"Sr88", 88.0},
    {"Ba138", 138.0},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::span<const Species> known_species() { return table; }

std::optional<Species> find_species(std::string_view name) {
  std::string key = lower(name);
  // strip a leading mass number ("9be") and a trailing '+'
  if (!key.empty() && key.back() == '+') key.pop_back();
  std::string digits, letters;
  for (char c : key) (std::isdigit(static_cast<unsigned char>(c)) ? digits : letters) += c;
  if (letters.empty()) return std::nullopt;

  for (const auto& s : table) {
    std::string full = lower(s.name);
    std::string sym = full.substr(0, full.find_first_of("0123456789"));
    std::string num = full.substr(sym.size());
    if (letters != sym) continue;
    // bare "Mg" resolves to the first (most common) isotope in the table
    if (digits.empty() || digits == num) return s;
  }
  return std::nullopt;
}

}  // namespace trapgate
