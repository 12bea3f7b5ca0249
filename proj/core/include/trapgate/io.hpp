#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "trapgate/force_design.hpp"
#include "trapgate/grid.hpp"
#include "trapgate/schrodinger.hpp"

namespace trapgate {

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

// Comma-separated table; numbers written with 17 significant digits.
// Header lines start with '#'.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& columns,
            const std::vector<std::string>& comments = {});
  void row(const std::vector<double>& values);
  // mixed row: empty strings in `text` are replaced by the matching value
  void row(const std::vector<std::string>& text, const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

std::string format_number(double v);

// JSON documents, SI units alongside natural ones. A non-empty hash is
// recorded as "config_hash".
std::string design_json(const GateDesign& design, std::string_view config_hash = {});
std::string sim_result_json(const SimResult& result, const Units& units,
                            std::string_view config_hash = {});

// Binary wavefunction snapshot, little-endian:
//   char[4] "TGWF", u32 version = 1, u32 n1, u32 n2,
//   f64 x1_min, x1_max, x2_min, x2_max (m), f64 time (s),
//   then n1 * n2 pairs of f64 (re, im), row-major in x1.
void write_snapshot(const std::filesystem::path& path, const WaveFunction2D& psi,
                    const Units& units);
// Converts extents and time back to natural units; amplitudes are stored as is.
WaveFunction2D read_snapshot(const std::filesystem::path& path, const Units& units);

}  // namespace trapgate
