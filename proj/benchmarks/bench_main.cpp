#include "pdicke/dicke_ladder.hpp"
#include "pdicke/dynamics.hpp"
#include "pdicke/em_greens.hpp"
#include "pdicke/fidelity.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace pdicke;

constexpr double kOmega = 2.37e15;
const DipoleVector kDz(0, 0, 2.53e-29);
const DipoleVector kDx(2.53e-29, 0, 0);

EnsembleConfig ensemble(int n) { return {n, kOmega, kDz, {0, 0, 1e-7}, Environment::kPerfectMirror}; }

void BM_TotalGreen(benchmark::State& state) {
  const Position3 a{1e-8, 0, 1e-7}, b{-3e-8, 2e-8, 2e-7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(total_green(Environment::kPerfectMirror, a, b, kOmega));
  }
}
BENCHMARK(BM_TotalGreen);

void BM_PurcellFactor(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(purcell_factor(Environment::kPerfectMirror, {0, 0, 1e-7}, kDz, kOmega));
  }
}
BENCHMARK(BM_PurcellFactor);

void BM_RateEquations(benchmark::State& state) {
  const RateLadder ladder = build_rate_ladder(ensemble(static_cast<int>(state.range(0))));
  const double t_max = default_t_max(ladder);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_rate_equations(ladder, t_max, SolverOptions{}));
  }
}
BENCHMARK(BM_RateEquations)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_DrivenCoherences(benchmark::State& state) {
  const EnsembleConfig cfg = ensemble(static_cast<int>(state.range(0)));
  DriveConfig drive;
  drive.intensity = 30000.0;
  drive.detuning = 2.0 * 3.141592653589793 * 1e8;
  const double t_max = 0.3 / build_rate_ladder(cfg).single_atom_rate();
  SolverOptions opts;
  opts.output_intervals = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_driven_coherences(cfg, drive, t_max, opts));
  }
}
BENCHMARK(BM_DrivenCoherences)->Arg(4)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Lindblad(benchmark::State& state) {
  const EnsembleConfig cfg = ensemble(static_cast<int>(state.range(0)));
  DriveConfig drive;
  drive.intensity = 30000.0;
  const double t_max = 0.3 / build_rate_ladder(cfg).single_atom_rate();
  SolverOptions opts;
  opts.output_intervals = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lindblad(cfg, drive, t_max, opts));
  }
}
BENCHMARK(BM_Lindblad)->Arg(4)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_FidelityMap(benchmark::State& state) {
  const GridSpec grid;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fidelity_map(grid, {0, 0, 1e-7}, kDx, kOmega, Environment::kPerfectMirror, threads));
  }
}
BENCHMARK(BM_FidelityMap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
