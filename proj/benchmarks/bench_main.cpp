#include <benchmark/benchmark.h>

#include "hypstab/cayley_ball.hpp"
#include "hypstab/circle.hpp"
#include "hypstab/geodesic_recognition.hpp"
#include "hypstab/hyperbolicity.hpp"

using namespace hypstab;

static void BM_SurfaceBall(benchmark::State& state) {
  const GroupModel m = GroupModel::surface_group(2);
  for (auto _ : state) benchmark::DoNotOptimize(build_ball(m, static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_SurfaceBall)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_SurfaceTube(benchmark::State& state) {
  const GroupModel m = GroupModel::surface_group(2);
  const Word axis = m.parse_word("a1 b1").power(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_tube(m, axis, 3).size());
}
BENCHMARK(BM_SurfaceTube)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

static void BM_ThinConstant(benchmark::State& state) {
  const Ball b = build_ball(GroupModel::surface_group(2), 6);
  for (auto _ : state) benchmark::DoNotOptimize(thin_constant(b, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ThinConstant)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& state) {
  const GroupModel m = GroupModel::surface_group(2);
  const Ball tube = build_tube(m, m.parse_word("a1 b1").power(150), 3);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const auto data = axis_coarse_data(tube, 1, 153, seed++);
    benchmark::DoNotOptimize(reconstruct(data, HalfInt(8), HalfInt(4), tube).chain.size());
  }
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

static void BM_SemiConjugacyBuild(benchmark::State& state) {
  const auto rho0 = CircleAction::standard(CircleSpec::fuchsian_genus2());
  const auto rho = rho0.conjugated(FourierHomeo::sine(0.01));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_semiconjugacy(rho0, rho, {static_cast<int>(state.range(0)), 0.9, 16}).matched);
  }
}
BENCHMARK(BM_SemiConjugacyBuild)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_SemiConjugacyEval(benchmark::State& state) {
  const auto rho0 = CircleAction::standard(CircleSpec::fuchsian_genus2());
  const auto h = build_semiconjugacy(rho0, rho0.conjugated(FourierHomeo::sine(0.01)), {6, 0.9, 16});
  double x = 0.123;
  for (auto _ : state) {
    x = wrap_unit(x + 0.618034);
    benchmark::DoNotOptimize(h(x));
  }
}
BENCHMARK(BM_SemiConjugacyEval);

BENCHMARK_MAIN();
