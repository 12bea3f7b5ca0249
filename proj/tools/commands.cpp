#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include <trapgate/errors.hpp>
#include <trapgate/io.hpp>
#include <trapgate/phase_model.hpp>
#include <trapgate/version.hpp>

namespace trapgate::cli {

namespace fs = std::filesystem;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

int exit_code_for(Errc code) {
  if (is_design_error(code)) return exit_design;
  if (is_simulation_error(code)) return exit_simulation;
  if (code == Errc::invalid_argument || code == Errc::out_of_range || code == Errc::io_failure)
    return exit_config;
  return exit_simulation;
}

fs::path output_dir(const ExperimentConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::string tf_tag(double tf_us) {
  std::ostringstream s;
  s << "tf" << std::setprecision(6) << tf_us << "us";
  return s.str();
}

std::vector<std::string> provenance(const ExperimentConfig& c) {
  return {"trapgate " + std::string(version), "config_hash " + c.hash()};
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text << '\n';
}

// Bounded worker pool over indices [0, n).
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
  int k = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  k = std::clamp<int>(k, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (int w = 0; w < k; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) fn(i);
    });
}

struct Prepared {
  GateDesign design;
  Grid2D grid;
  WaveFunction2D initial;
  ForceModel model;
};

Prepared prepare_simulation(const ExperimentConfig& c, double tf_us) {
  GateDesign d = make_design(c, tf_us);
  const TwoIonSystem& s = d.system();
  GridOptions go;
  go.n1 = go.n2 = c.grid;
  const Grid2D g = make_grid(s, design_excursion(d), c.fock, go);
  WaveFunction2D psi = c.fock == 0 ? imaginary_time_ground_state(g, s).psi
                                   : fock_initial_state(g, s, c.fock);
  return {std::move(d), g, std::move(psi), make_force_model(c, s)};
}

SimulationOptions simulation_options(const ExperimentConfig& c) {
  SimulationOptions o;
  o.dt_divisor = c.dt_divisor;
  o.converge = c.converge;
  o.n_plus = c.fock;
  return o;
}

}  // namespace

int run_design(const ExperimentConfig& c) {
  const fs::path dir = output_dir(c);
  auto summary_file = open_output(dir / "design.csv");
  CsvWriter summary(summary_file,
                    {"tf_us", "status", "max_force_N", "force_integral1_Ns", "force_integral2_Ns",
                     "differential_phase"},
                    provenance(c));
  int status = exit_ok;
  std::cout << "tf (us)    max|F| (zN)    int|F1|dt (zN us)\n";
  for (double tf : c.tf_us) {
    try {
      const GateDesign d = make_design(c, tf);
      const Units u = d.ions().units();
      write_text(dir / ("design_" + tf_tag(tf) + ".json"), design_json(d, c.hash()));

      auto curve_file = open_output(dir / ("forces_" + tf_tag(tf) + ".csv"));
      CsvWriter curve(curve_file, {"t_us", "F1_up_N", "F1_down_N", "F2_up_N", "F2_down_N"},
                      provenance(c));
      const ForceProfile& p = d.force();
      for (int k = 0; k < c.samples; ++k) {
        const double t = d.duration() * k / (c.samples - 1);
        curve.row({t * u.time * 1e6, p.force(1, Spin::up, t) * u.force(),
                   p.force(1, Spin::down, t) * u.force(), p.force(2, Spin::up, t) * u.force(),
                   p.force(2, Spin::down, t) * u.force()});
      }

      const double fmax = max_force(p) * u.force();
      const ForceIntegral fi = force_integral_proxy(p);
      const double ns = u.force() * u.time;
      summary.row({"", "ok", "", "", "", ""},
                  {tf, 0, fmax, fi.ion1 * ns, fi.ion2 * ns, d.differential_phase()});
      std::cout << std::setw(8) << tf << "   " << std::setw(12) << std::fixed
                << std::setprecision(2) << fmax * 1e21 << "   " << std::setw(12)
                << fi.ion1 * ns * 1e27 << std::defaultfloat << '\n';
    } catch (const Error& e) {
      std::cerr << "tf = " << tf << " us: " << e.what() << '\n';
      summary.row({"", std::string(to_string(e.code())), "", "", "", ""}, {tf, 0, nan, nan, nan, nan});
      status = std::max(status, exit_code_for(e.code()));
    }
  }
  return status;
}

int run_simulate(const ExperimentConfig& c) {
  const fs::path dir = output_dir(c);
  auto summary_file = open_output(dir / "simulate.csv");
  CsvWriter summary(summary_file,
                    {"tf_us", "differential_phase", "differential_phase_wrapped", "target",
                     "abs_overlap", "infidelity", "phase_ud", "phase_uu"},
                    provenance(c));
  int status = exit_ok;
  for (double tf : c.tf_us) {
    try {
      Prepared p = prepare_simulation(c, tf);
      const Units u = p.design.ions().units();
      SimulationOptions o = simulation_options(c);
      std::mutex write_lock;
      if (c.snapshot_interval > 0) {
        o.propagation.observer_interval = c.snapshot_interval;
        o.propagation.observer = [&](const WaveFunction2D& psi) {
          std::ostringstream name;
          name << "snapshot_" << tf_tag(tf) << "_" << (psi.config ? to_string(*psi.config) : "na")
               << "_" << std::setw(8) << std::setfill('0')
               << std::lround(psi.time / p.design.duration() * 1e6) << ".tgwf";
          std::lock_guard lock(write_lock);
          write_snapshot(dir / name.str(), psi, u);
        };
      }
      const SimResult r = differential_phase_experiment(p.design, p.model, p.initial, o);
      write_text(dir / ("sim_" + tf_tag(tf) + ".json"), sim_result_json(r, u, c.hash()));
      double ud = nan, uu = nan;
      for (const auto& run : r.runs) {
        if (run.config == up_down) ud = run.phase;
        if (run.config == up_up) uu = run.phase;
      }
      summary.row({tf, r.differential_phase, r.differential_phase_wrapped, r.target, r.abs_overlap,
                   r.infidelity, ud, uu});
      std::cout << "tf = " << tf << " us: dphi = " << std::setprecision(9) << r.differential_phase
                << " (target " << r.target << "), |S| = " << r.abs_overlap
                << ", worst-case infidelity = " << std::setprecision(4) << r.infidelity << '\n';
      std::cerr << "  " << r.steps << " steps on " << r.grid.n1 << "x" << r.grid.n2 << " in "
                << std::setprecision(3) << r.runtime_seconds << " s\n";
    } catch (const Error& e) {
      std::cerr << "tf = " << tf << " us: " << e.what() << '\n';
      status = std::max(status, exit_code_for(e.code()));
    }
  }
  return status;
}

int run_sweep(const ExperimentConfig& c) {
  if (c.tf_us.size() < 2) throw ConfigError("a sweep needs at least two tf_us points");
  const fs::path dir = output_dir(c);

  struct Row {
    std::string status = "ok";
    double design_phase = nan, phase = nan, infidelity = nan, fmax = nan, integral = nan;
  };
  std::vector<Row> rows(c.tf_us.size());
  std::mutex log;

  parallel_for(rows.size(), c.threads, [&](std::size_t i) {
    const double tf = c.tf_us[i];
    Row& row = rows[i];
    try {
      const GateDesign d = make_design(c, tf);
      const Units u = d.ions().units();
      row.design_phase = d.differential_phase();
      row.fmax = max_force(d.force()) * u.force();
      row.integral = force_integral_proxy(d.force()).ion1 * u.force() * u.time;
      if (c.simulate) {
        Prepared p = prepare_simulation(c, tf);
        SimulationOptions o = simulation_options(c);
        o.parallel = false;
        const SimResult r = differential_phase_experiment(p.design, p.model, p.initial, o);
        row.phase = r.differential_phase;
        row.infidelity = r.infidelity;
      }
    } catch (const Error& e) {
      row.status = is_design_error(e.code()) ? "skipped:" + std::string(to_string(e.code()))
                                             : "failed:" + std::string(to_string(e.code()));
      std::lock_guard lock(log);
      std::cerr << "tf = " << tf << " us " << row.status << ": " << e.what() << '\n';
    }
  });

  auto file = open_output(dir / "sweep.csv");
  CsvWriter csv(file,
                {"tf_us", "status", "differential_phase_design", "differential_phase",
                 "infidelity", "max_force_N", "force_integral_Ns"},
                provenance(c));
  int ok = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    ok += r.status == "ok";
    csv.row({"", r.status, "", "", "", "", ""},
            {c.tf_us[i], 0, r.design_phase, r.phase, r.infidelity, r.fmax, r.integral});
  }
  std::cout << ok << " of " << rows.size() << " sweep points completed; wrote "
            << (dir / "sweep.csv").string() << '\n';
  return exit_ok;
}

namespace {

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass() const { return std::isfinite(value) && value <= tolerance; }
};

std::vector<Check> verify_design(const GateDesign& d) {
  std::vector<Check> out;

  double boundary = 0.0;
  for (SpinConfig cfg : all_spin_configs)
    for (Mode m : {Mode::plus, Mode::minus}) {
      const BoundaryResidual r = boundary_residual(design_trajectory(d, cfg, m));
      if (r.peak > 0.0) boundary = std::max(boundary, std::max(r.start, r.end) / r.peak);
    }
  out.push_back({"boundary_conditions", boundary, 1e-9});

  out.push_back({"series_phase_vs_gamma", std::abs(d.differential_phase() - d.gamma()), 1e-9});
  out.push_back(
      {"quadrature_phase_vs_gamma", std::abs(differential_phase_quadrature(d) - d.gamma()), 1e-9});

  double single = 0.0, lr = 0.0;
  for (SpinConfig cfg : all_spin_configs) {
    std::vector<Trajectory> modes{design_trajectory(d, cfg, Mode::plus),
                                  design_trajectory(d, cfg, Mode::minus)};
    const double phi = d.configuration_phase(cfg);
    single = std::max(single, std::abs(gate_phase_single_integral(modes) - phi));
    const double g = lr_integral(modes[0], d.duration()) + lr_integral(modes[1], d.duration());
    lr = std::max(lr, std::abs(-g - phi));
  }
  out.push_back({"single_integral_phase", single, 1e-6});
  out.push_back({"lewis_riesenfeld_phase", lr, 1e-6});

  double spread = 0.0;
  if (d.equal_mass()) {
    for (double r : {-2.0, -0.5, 3.0})
      spread = std::max(spread, std::abs(apply_force_ratio(d, r).differential_phase() - d.gamma()));
  } else {
    for (auto [a, b] : {std::pair{-2.0, 0.5}, {-0.5, -3.0}, {3.0, -2.0}})
      spread =
          std::max(spread, std::abs(apply_force_ratio(d, a, b).differential_phase() - d.gamma()));
  }
  out.push_back({"force_ratio_invariance", spread, 1e-9});

  if (d.equal_mass()) {
    const IonPair near = IonPair(d.ions().m1(), 1.0 + 1e-9, d.ions().omega1(), d.ions().constants());
    DifferentMassOptions o;
    o.gamma = d.gamma();
    const GateDesign dm = design_different_mass(near, d.duration(), o);
    const double scale = max_force(d.force());
    double diff = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double t = d.duration() * (k + 0.5) / 1000;
      diff = std::max(diff, std::abs(dm.force().base_a(t) - d.force().base_a(t)) / scale);
    }
    out.push_back({"equal_mass_limit", diff, 1e-4});
  }

  // a constant force offset shifts the phase by (df/2) int alpha dt, zero here
  double offset = 0.0;
  for (Mode m : {Mode::plus, Mode::minus}) {
    const CosineSeries a = d.trajectory(up_down, m);
    const BoundaryResidual r = boundary_residual(design_trajectory(d, up_down, m));
    if (r.peak == 0.0) continue;
    const double s = offset_sensitivity([&](double t) { return a(t); }, 1.0, d.duration());
    offset = std::max(offset, std::abs(s) / (r.peak * d.duration()));
  }
  out.push_back({"offset_sensitivity", offset, 1e-9});
  return out;
}

}  // namespace

int run_verify(const ExperimentConfig& c) {
  const fs::path dir = output_dir(c);
  nlohmann::ordered_json report;
  report["version"] = version;
  report["config_hash"] = c.hash();
  report["points"] = nlohmann::ordered_json::array();
  bool all = true;
  int status = exit_ok;
  for (double tf : c.tf_us) {
    nlohmann::ordered_json point;
    point["tf_us"] = tf;
    try {
      const GateDesign d = make_design(c, tf);
      point["checks"] = nlohmann::ordered_json::array();
      for (const Check& k : verify_design(d)) {
        all = all && k.pass();
        point["checks"].push_back(
            {{"name", k.name}, {"value", k.value}, {"tolerance", k.tolerance}, {"pass", k.pass()}});
        std::cout << (k.pass() ? "PASS " : "FAIL ") << "tf=" << tf << "us " << k.name << " "
                  << std::setprecision(3) << k.value << " (tol " << k.tolerance << ")\n";
      }
    } catch (const Error& e) {
      point["error"] = e.what();
      std::cerr << "tf = " << tf << " us: " << e.what() << '\n';
      status = std::max(status, exit_code_for(e.code()));
    }
    report["points"].push_back(point);
  }
  report["pass"] = all && status == exit_ok;
  write_text(dir / "verify.json", report.dump(2));
  if (status != exit_ok) return status;
  return all ? exit_ok : exit_verify_failed;
}

}  // namespace trapgate::cli
