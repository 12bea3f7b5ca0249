#include <array>

#include <benchmark/benchmark.h>

#include <trapgate/force_design.hpp>
#include <trapgate/phase_model.hpp>
#include <trapgate/schrodinger.hpp>

using namespace trapgate;

namespace {

const IonPair& beryllium() {
  static const IonPair ions = IonPair::from_amu(9, 9, 2.0 * pi * 2e6);
  return ions;
}

double tf_natural(double us) { return us * 1e-6 / beryllium().units().time; }

void BM_ForceEvaluation(benchmark::State& state) {
  const GateDesign d = design_equal_mass(beryllium(), tf_natural(0.5));
  double t = 0.0, sum = 0.0;
  for (auto _ : state) {
    const auto f = d.force().forces(up_down, t);
    sum += f[0];
    t += 1e-3;
    if (t > d.duration()) t = 0.0;
  }
  benchmark::DoNotOptimize(sum);
}
BENCHMARK(BM_ForceEvaluation);

void BM_DesignDifferentMass(benchmark::State& state) {
  const IonPair ions = IonPair::from_amu(9, 25, 2.0 * pi * 2e6);
  const double tf = 0.5e-6 / ions.units().time;
  for (auto _ : state) benchmark::DoNotOptimize(design_different_mass(ions, tf));
}
BENCHMARK(BM_DesignDifferentMass);

void BM_DoubleIntegralPhase(benchmark::State& state) {
  const GateDesign d = design_equal_mass(beryllium(), tf_natural(0.5));
  std::vector<ModeDrive> drives;
  for (Mode m : {Mode::plus, Mode::minus}) {
    const Trajectory tr = design_trajectory(d, up_down, m);
    drives.push_back({[tr](double t) { return tr.force(t); }, tr.omega()});
  }
  for (auto _ : state) benchmark::DoNotOptimize(gate_phase_double_integral(drives, d.duration()));
}
BENCHMARK(BM_DoubleIntegralPhase)->Unit(benchmark::kMillisecond);

void BM_SplitStep(benchmark::State& state) {
  const TwoIonSystem s(beryllium());
  GridOptions o;
  o.n1 = o.n2 = static_cast<int>(state.range(0));
  const Grid2D g = make_grid(s, {1.0, 1.0}, 0, o);
  const WaveFunction2D psi = fock_initial_state(g, s, 0);
  const auto forces = [](double) { return std::array<double, 2>{0.1, -0.1}; };
  const int steps = 16;
  for (auto _ : state)
    benchmark::DoNotOptimize(propagate_real_time(psi, s, forces, ForceModel::homogeneous(), 0.1, steps));
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_SplitStep)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
