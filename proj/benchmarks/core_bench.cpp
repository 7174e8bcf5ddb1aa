#include <benchmark/benchmark.h>

#include "fanoscope/fano.hpp"
#include "fanoscope/fourfold.hpp"
#include "fanoscope/pencil.hpp"
#include "fanoscope/projective.hpp"
#include "fanoscope/rationality.hpp"
#include "fanoscope/sampling.hpp"
#include "fanoscope/torsor.hpp"

namespace fanoscope {
namespace {

const Field& field_arg(const benchmark::State& state) { return Field::get(static_cast<std::uint32_t>(state.range(0))); }

NormalizedThreefold general(const Field& F, std::uint64_t seed) {
  Rng rng(seed);
  return sample_general_threefold(F, rng, true, 1).nf;
}

static void BM_EnumerateLinesP4(benchmark::State& state) {
  const Field& F = field_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_lines(F, 4).size());
}
BENCHMARK(BM_EnumerateLinesP4)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_CertifyGenerality(benchmark::State& state) {
  const Field& F = field_arg(state);
  const NormalizedThreefold nf = general(F, 1);
  for (auto _ : state) benchmark::DoNotOptimize(certify_generality(nf, 2).general());
}
BENCHMARK(BM_CertifyGenerality)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_ComputeZ(benchmark::State& state) {
  const NormalizedThreefold nf = general(field_arg(state), 2);
  for (auto _ : state) benchmark::DoNotOptimize(compute_Z(nf).total_length());
}
BENCHMARK(BM_ComputeZ)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMicrosecond);

static void BM_ZetaOfDiscriminantCurve(benchmark::State& state) {
  const NormalizedThreefold nf = general(field_arg(state), 3);
  for (auto _ : state) benchmark::DoNotOptimize(zeta(HyperellipticModel{discriminant(nf)}).h);
}
BENCHMARK(BM_ZetaOfDiscriminantCurve)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMicrosecond);

static void BM_EnumerateFano(benchmark::State& state) {
  const NormalizedThreefold nf = general(field_arg(state), 4);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_fano(nf, 1).size());
}
BENCHMARK(BM_EnumerateFano)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_TorsorPointsOverExtension(benchmark::State& state) {
  const Field& F = field_arg(state);
  const NormalizedThreefold nf = general(F, 5);
  for (auto _ : state) {
    const FanoModel m(nf, F);
    benchmark::DoNotOptimize(m.extension().torsor_points().size());
  }
}
BENCHMARK(BM_TorsorPointsOverExtension)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_GroupAxioms(benchmark::State& state) {
  const Field& F = Field::get(5);
  Rng sampler(6);
  for (;;) {
    const NormalizedThreefold nf = sample_general_threefold(F, sampler, true, 1).nf;
    const FanoModel m(nf, F);
    if (m.z_points().empty() || m.curve_points().empty()) continue;
    const TorsorGroup g(m);
    for (auto _ : state) {
      Rng rng(7);
      benchmark::DoNotOptimize(verify_group_axioms(g, AxiomBudget{static_cast<int>(state.range(0)), 5}, rng).pass());
    }
    return;
  }
}
BENCHMARK(BM_GroupAxioms)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_DecideOverFiniteField(benchmark::State& state) {
  const NormalizedThreefold nf = general(field_arg(state), 8);
  for (auto _ : state) benchmark::DoNotOptimize(decide_over_finite_field(nf).verified);
}
BENCHMARK(BM_DecideOverFiniteField)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_LocalSolvability(benchmark::State& state) {
  QMat gram(4, QVec(4, 0));
  const int d[4] = {1, 1, 1, -7};
  for (int i = 0; i < 4; ++i) gram[i][i] = d[i];
  for (auto _ : state) benchmark::DoNotOptimize(local_solvability(gram).solvable);
}
BENCHMARK(BM_LocalSolvability)->Unit(benchmark::kMicrosecond);

static void BM_PlaneDiscriminant(benchmark::State& state) {
  const Field& F = field_arg(state);
  Rng rng(9);
  const NormalizedFourfold nx = sample_general_fourfold(F, rng);
  for (auto _ : state) benchmark::DoNotOptimize(plane_discriminant(nx, 1).smooth);
}
BENCHMARK(BM_PlaneDiscriminant)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_FiberScan(benchmark::State& state) {
  const Field& F = Field::get(5);
  Rng rng(10);
  const NormalizedFourfold nx = sample_general_fourfold(F, rng);
  const auto duals = enumerate_points(F, 2);
  FiberScanOptions opt;
  opt.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fiber_scan(nx, duals, opt).size());
}
BENCHMARK(BM_FiberScan)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fanoscope

// The packaged benchmark_main archive is LTO bytecode tied to another compiler build.
BENCHMARK_MAIN();
