#include "trapgate/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "trapgate/errors.hpp"
#include "trapgate/version.hpp"

namespace trapgate {

namespace {

using json = nlohmann::ordered_json;

template <class T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw Error(Errc::io_failure, "snapshot is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

constexpr char snapshot_magic[4] = {'T', 'G', 'W', 'F'};
constexpr std::uint32_t snapshot_version = 1;

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& columns,
                     const std::vector<std::string>& comments)
    : out_(out), columns_(columns.size()) {
  for (const auto& c : comments) out_ << "# " << c << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  row(std::vector<std::string>(values.size()), values);
}

void CsvWriter::row(const std::vector<std::string>& text, const std::vector<double>& values) {
  if (text.size() != columns_ || values.size() != columns_)
    throw Error(Errc::invalid_argument, "CSV row width does not match the header");
  for (std::size_t i = 0; i < columns_; ++i)
    out_ << (i ? "," : "") << (text[i].empty() ? format_number(values[i]) : text[i]);
  out_ << '\n';
}

std::string design_json(const GateDesign& d, std::string_view config_hash) {
  const Units u = d.ions().units();
  const NormalModeBasis& b = d.basis();
  json j;
  j["version"] = version;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  j["ions"] = {{"m1_kg", d.ions().m1()},
               {"m2_kg", d.ions().m2()},
               {"mass_ratio", d.ions().mass_ratio()},
               {"omega1_rad_s", d.ions().omega1()}};
  j["geometry"] = {{"x1_m", d.geometry().x1 * u.length},
                   {"x2_m", d.geometry().x2 * u.length},
                   {"separation_m", d.geometry().separation * u.length}};
  j["modes"] = {{"omega_plus", b.omega_plus},   {"omega_minus", b.omega_minus},
                {"a_plus", b.a_plus},           {"a_minus", b.a_minus},
                {"b_plus", b.b_plus},           {"b_minus", b.b_minus}};
  j["duration_s"] = d.duration() * u.time;
  j["duration"] = d.duration();
  j["gamma"] = d.gamma();
  j["variant"] = to_string(d.variant());
  j["equal_mass"] = d.equal_mass();
  j["negative_branch"] = d.negative_branch();
  j["force_ratio"] = {{"c1", d.ratio().c1}, {"c2", d.ratio().c2}};
  j["scaling"] = d.scaling();
  if (const auto& c = d.critical_times())
    j["critical_times_s"] = {c->t1 * u.time, c->t2 * u.time};
  const AnsatzCoefficients a = d.coefficients();
  j["ansatz"] = {{"mode", to_string(a.mode)},
                 {"config", to_string(a.config)},
                 {"coefficients", std::vector<double>(a.a.begin(), a.a.end())}};
  const ForceClosedForm& f = d.force().base();
  j["base_force"] = {{"prefactor_N", f.prefactor * u.force()},
                     {"g", {f.g1, f.g2, f.g3}}};
  json mult = json::object();
  for (int ion : {1, 2})
    mult["ion" + std::to_string(ion)] = {{"up", d.force().multiplier(ion, Spin::up)},
                                         {"down", d.force().multiplier(ion, Spin::down)}};
  j["multipliers"] = mult;
  const ForceIntegral fi = force_integral_proxy(d.force());
  j["max_force_N"] = max_force(d.force()) * u.force();
  j["force_integral_Ns"] = {fi.ion1 * u.force() * u.time, fi.ion2 * u.force() * u.time};
  json phases = json::object();
  for (SpinConfig c : all_spin_configs) phases[to_string(c)] = d.configuration_phase(c);
  j["configuration_phases"] = phases;
  j["differential_phase"] = d.differential_phase();
  return j.dump(2);
}

std::string sim_result_json(const SimResult& r, const Units& u, std::string_view config_hash) {
  json j;
  j["version"] = version;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  j["overlap"] = complex_json(r.overlap);
  j["abs_overlap"] = r.abs_overlap;
  j["phase"] = r.phase;
  json runs = json::array();
  for (const auto& c : r.runs)
    runs.push_back({{"config", to_string(c.config)},
                    {"overlap", complex_json(c.overlap)},
                    {"phase", c.phase},
                    {"predicted_phase", c.predicted_phase},
                    {"max_norm_error", c.max_norm_error},
                    {"max_boundary_ratio", c.max_boundary_ratio}});
  j["runs"] = runs;
  j["differential_phase_wrapped"] = r.differential_phase_wrapped;
  j["differential_phase"] = r.differential_phase;
  j["target"] = r.target;
  j["predicted_differential_phase"] = r.predicted_differential_phase;
  j["fidelity"] = r.fidelity;
  j["infidelity"] = r.infidelity;
  j["grid"] = {{"n1", r.grid.n1},
               {"n2", r.grid.n2},
               {"x1_m", {r.grid.x1_min * u.length, r.grid.x1_max * u.length}},
               {"x2_m", {r.grid.x2_min * u.length, r.grid.x2_max * u.length}}};
  j["force_model"] = {{"kind", to_string(r.model.kind)}, {"dk_per_m", r.model.dk / u.length}};
  j["steps"] = r.steps;
  j["dt_s"] = r.dt * u.time;
  j["n_plus"] = r.n_plus;
  return j.dump(2);
}

void write_snapshot(const std::filesystem::path& path, const WaveFunction2D& psi,
                    const Units& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot open " + path.string());
  out.write(snapshot_magic, 4);
  put<std::uint32_t>(out, snapshot_version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(psi.grid.n1));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(psi.grid.n2));
  for (double x : {psi.grid.x1_min, psi.grid.x1_max, psi.grid.x2_min, psi.grid.x2_max})
    put<double>(out, x * u.length);
  put<double>(out, psi.time * u.time);
  for (const auto& v : psi.data) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw Error(Errc::io_failure, "failed writing " + path.string());
}

WaveFunction2D read_snapshot(const std::filesystem::path& path, const Units& u) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, snapshot_magic, 4) != 0)
    throw Error(Errc::io_failure, path.string() + " is not a wavefunction snapshot");
  if (get<std::uint32_t>(in) != snapshot_version)
    throw Error(Errc::io_failure, "unsupported snapshot version");
  Grid2D g;
  g.n1 = static_cast<int>(get<std::uint32_t>(in));
  g.n2 = static_cast<int>(get<std::uint32_t>(in));
  g.x1_min = get<double>(in) / u.length;
  g.x1_max = get<double>(in) / u.length;
  g.x2_min = get<double>(in) / u.length;
  g.x2_max = get<double>(in) / u.length;
  g.validate();
  WaveFunction2D psi(g);
  psi.time = get<double>(in) / u.time;
  for (auto& v : psi.data) {
    const double re = get<double>(in);
    v = {re, get<double>(in)};
  }
  return psi;
}

}  // namespace trapgate
