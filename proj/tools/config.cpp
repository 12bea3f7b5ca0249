#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <tuple>

#include <trapgate/io.hpp>

namespace trapgate::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(x)) throw ConfigError(key + ": not a number: '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError(key + ": not an integer: '" + v + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// numbers, or multiples of pi: "pi", "-pi", "0.5pi", "-pi/2"
double parse_angle(const std::string& key, const std::string& v) {
  static const std::regex re(R"(^([+-]?)([0-9]*\.?[0-9]*)\*?pi(?:/([0-9]+\.?[0-9]*))?$)");
  std::smatch m;
  if (!std::regex_match(v, m, re)) return parse_double(key, v);
  double x = pi;
  if (m[2].length() > 0) x *= parse_double(key, m[2]);
  if (m[3].length() > 0) x /= parse_double(key, m[3]);
  return m[1] == "-" ? -x : x;
}

std::pair<std::string, double> parse_species(const std::string& key, const std::string& v) {
  if (auto s = find_species(v)) return {std::string(s->name), s->mass_amu};
  const double m = parse_double(key, v);
  if (!(m > 0.0)) throw ConfigError(key + ": mass must be positive");
  return {v, m};
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"species",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto comma = v.find(',');
         const std::string a = trim(v.substr(0, comma));
         const std::string b = comma == std::string::npos ? a : trim(v.substr(comma + 1));
         std::tie(c.species1, c.mass1_amu) = parse_species(k, a);
         std::tie(c.species2, c.mass2_amu) = parse_species(k, b);
       }},
      {"omega1_mhz",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.omega1_mhz = parse_double(k, v);
         if (!(c.omega1_mhz > 0.0)) throw ConfigError(k + ": must be positive");
       }},
      {"tf_us",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         c.tf_us = parse_duration_list(v);
       }},
      {"gamma",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "auto") c.gamma.reset();
         else c.gamma = parse_angle(k, v);
       }},
      {"variant",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         auto p = parse_inversion_variant(v);
         if (!p) throw ConfigError(k + ": unknown variant '" + v + "'");
         c.variant = *p;
       }},
      {"negative_branch",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.negative_branch = parse_bool(k, v);
       }},
      {"c1", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.c1 = parse_double(k, v); }},
      {"c2", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.c2 = parse_double(k, v); }},
      {"guard_band",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.guard_band = parse_double(k, v);
       }},
      {"force_model",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         auto p = parse_force_kind(v);
         if (!p) throw ConfigError(k + ": expected homogeneous or sinusoidal, got '" + v + "'");
         c.force_model = *p;
       }},
      {"periods",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.periods = parse_int(k, v);
         if (c.periods <= 0) throw ConfigError(k + ": must be positive");
       }},
      {"dk_per_m",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "auto") c.dk_per_m.reset();
         else c.dk_per_m = parse_double(k, v);
       }},
      {"grid",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.grid = parse_int(k, v);
         if (c.grid < 8 || (c.grid & (c.grid - 1)) != 0)
           throw ConfigError(k + ": must be a power of two >= 8");
       }},
      {"dt_divisor",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.dt_divisor = parse_int(k, v);
         if (c.dt_divisor < 1) throw ConfigError(k + ": must be positive");
       }},
      {"fock",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.fock = parse_int(k, v);
         if (c.fock < 0) throw ConfigError(k + ": must be non-negative");
       }},
      {"converge",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.converge = parse_bool(k, v); }},
      {"snapshot_interval",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.snapshot_interval = parse_int(k, v);
       }},
      {"simulate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.simulate = parse_bool(k, v); }},
      {"samples",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.samples = parse_int(k, v);
         if (c.samples < 2) throw ConfigError(k + ": need at least 2 samples");
       }},
      {"threads",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.threads = parse_int(k, v); }},
      {"out", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out = v; }},
  };
  return table;
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  const auto& table = setters();
  auto it = table.find(trim(key));
  if (it == table.end()) throw ConfigError("unknown setting '" + key + "'");
  it->second(c, it->first, trim(value));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  ExperimentConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

std::vector<double> parse_duration_list(const std::string& text) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
    if (parts.size() != 3) throw ConfigError("tf_us range must be start:stop:count");
    const double a = parse_double("tf_us", parts[0]);
    const double b = parse_double("tf_us", parts[1]);
    const int n = parse_int("tf_us", parts[2]);
    if (n < 1) throw ConfigError("tf_us range needs a positive count");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_double("tf_us", trim(p)));
  }
  if (out.empty()) throw ConfigError("tf_us is empty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0)) throw ConfigError("tf_us values must be positive");
    if (i > 0 && !(out[i] > out[i - 1])) throw ConfigError("tf_us values must be strictly increasing");
  }
  return out;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream s;
  auto line = [&](const char* k, const std::string& v) { s << k << " = " << v << '\n'; };
  line("species", species1 + "," + species2);
  line("mass_amu", format_number(mass1_amu) + "," + format_number(mass2_amu));
  line("omega1_mhz", format_number(omega1_mhz));
  std::string tfs;
  for (double t : tf_us) tfs += (tfs.empty() ? "" : ",") + format_number(t);
  line("tf_us", tfs);
  line("gamma", gamma ? format_number(*gamma) : "auto");
  line("variant", to_string(variant));
  line("negative_branch", negative_branch ? "true" : "false");
  line("c1", format_number(c1));
  line("c2", format_number(c2));
  line("guard_band", format_number(guard_band));
  line("force_model", to_string(force_model));
  line("periods", std::to_string(periods));
  line("dk_per_m", dk_per_m ? format_number(*dk_per_m) : "auto");
  line("grid", std::to_string(grid));
  line("dt_divisor", std::to_string(dt_divisor));
  line("fock", std::to_string(fock));
  line("converge", converge ? "true" : "false");
  line("simulate", simulate ? "true" : "false");
  line("samples", std::to_string(samples));
  return s.str();
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(canonical()); }

IonPair make_ions(const ExperimentConfig& c) {
  if (c.mass2_amu < c.mass1_amu)
    throw ConfigError("list the lighter ion first (species = " + c.species2 + "," + c.species1 + ")");
  return IonPair::from_amu(c.mass1_amu, c.mass2_amu, 2.0 * pi * c.omega1_mhz * 1e6);
}

GateDesign make_design(const ExperimentConfig& c, double tf_us) {
  const IonPair ions = make_ions(c);
  const double tf = tf_us * 1e-6 / ions.units().time;
  const bool symmetric = c.c1 == -1.0 && c.c2 == -1.0;
  if (c.mass1_amu == c.mass2_amu) {
    if (c.c1 != c.c2) throw ConfigError("equal masses share one force ratio: set c1 = c2");
    GateDesign d = design_equal_mass(ions, tf, c.gamma.value_or(-pi), {c.negative_branch});
    return symmetric ? d : apply_force_ratio(d, c.c1);
  }
  DifferentMassOptions o;
  o.variant = c.variant;
  o.gamma = c.gamma;
  o.negative_branch = c.negative_branch;
  o.guard_band = c.guard_band;
  GateDesign d = design_different_mass(ions, tf, o);
  return symmetric ? d : apply_force_ratio(d, c.c1, c.c2);
}

ForceModel make_force_model(const ExperimentConfig& c, const TwoIonSystem& s) {
  if (c.force_model == ForceKind::homogeneous) return ForceModel::homogeneous();
  if (c.dk_per_m) return ForceModel::sinusoidal(*c.dk_per_m * s.ions.units().length);
  return ForceModel::sinusoidal(periods_wavenumber(s.geometry, c.periods));
}

}  // namespace trapgate::cli
