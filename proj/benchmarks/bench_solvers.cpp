#include <benchmark/benchmark.h>

#include "kirchhoff/energies.hpp"
#include "kirchhoff/integrate.hpp"

using namespace kirchhoff;

namespace {

IntegratorSettings log_settings(double t_end, std::size_t count) {
  IntegratorSettings s;
  s.grid = {GridKind::Log, count, t_end};
  return s;
}

void BM_SolveHyperbolic(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  const auto spec = Spectrum::power_law(1.0, 2.0, 4);
  const ModalVector u0{1.0, 0.5, 0.25, 0.125}, u1(4);
  const auto settings = log_settings(100.0, 400);
  for (auto _ : state) {
    auto traj = solve_hyperbolic(spec, PowerNonlinearity{1.0}, PowerLawDissipation{0.5}, eps, u0, u1, settings);
    benchmark::DoNotOptimize(traj.u.back()[0]);
  }
}
BENCHMARK(BM_SolveHyperbolic)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SolveParabolicReparam(benchmark::State& state) {
  const auto spec = Spectrum::power_law(1.0, 2.0, static_cast<std::size_t>(state.range(0)));
  const ModalVector u0(spec.size(), 1.0);
  const auto settings = log_settings(1e5, 1000);
  for (auto _ : state) {
    auto traj = solve_parabolic_reparam(spec, PowerNonlinearity{2.0}, PowerLawDissipation{1.0}, u0, settings);
    benchmark::DoNotOptimize(traj.u.back()[0]);
  }
}
BENCHMARK(BM_SolveParabolicReparam)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveParabolicDirect(benchmark::State& state) {
  const auto spec = Spectrum::power_law(1.0, 2.0, static_cast<std::size_t>(state.range(0)));
  const ModalVector u0(spec.size(), 1.0);
  const auto settings = log_settings(100.0, 400);
  for (auto _ : state) {
    auto traj = solve_parabolic_direct(spec, PowerNonlinearity{2.0}, PowerLawDissipation{1.0}, u0, settings);
    benchmark::DoNotOptimize(traj.u.back()[0]);
  }
}
BENCHMARK(BM_SolveParabolicDirect)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EnergySuite(benchmark::State& state) {
  const auto spec = Spectrum::power_law(1.0, 1.0, 16);
  const ModalVector u0(16, 0.5), u1(16, 0.1);
  const auto traj = solve_hyperbolic(spec, PowerNonlinearity{1.0}, PowerLawDissipation{0.0}, 0.01, u0, u1,
                                     log_settings(10.0, 2000));
  const std::vector<double> ks{0.0, 1.0};
  for (auto _ : state) {
    auto series = energy_suite(traj, spec, PowerNonlinearity{1.0}, 0.01, ks);
    benchmark::DoNotOptimize(series.channels.front().values.back());
  }
}
BENCHMARK(BM_EnergySuite)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
