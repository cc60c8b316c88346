#include <random>

#include <benchmark/benchmark.h>

#include "qhflux/harness.hpp"
#include "qhflux/kernel.hpp"
#include "qhflux/partition.hpp"
#include "qhflux/plasma.hpp"
#include "qhflux/potentials.hpp"

using namespace qhflux;

namespace {

HoleConfig config(long N, std::size_t n) {
  std::mt19937_64 rng(1);
  HoleConfig c{std::vector<cplx>(n), N, static_cast<double>(N)};
  for (auto& w : c.w) w = sample_disk(rng, 0.7);
  return c;
}

void BM_KernelEval(benchmark::State& st) {
  const KernelSpec s{static_cast<double>(st.range(0)), st.range(0) + 2};
  const cplx z{0.3, 0.2}, w{-0.1, 0.4};
  for (auto _ : st) benchmark::DoNotOptimize(kernel_eval(s, z, w));
}
BENCHMARK(BM_KernelEval)->Arg(64)->Arg(256)->Arg(512);

void BM_KernelDerivative(benchmark::State& st) {
  const KernelSpec s{static_cast<double>(st.range(0)), st.range(0) + 2};
  const cplx z{0.3, 0.2}, w{-0.1, 0.4};
  for (auto _ : st) benchmark::DoNotOptimize(kernel_derivative(s, z, w, {{0, 1, 1, 0}}, KernelKind::truncated));
}
BENCHMARK(BM_KernelDerivative)->Arg(64)->Arg(512);

void BM_LogPartition(benchmark::State& st) {
  const HoleConfig c = config(st.range(0), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(log_partition(c));
}
BENCHMARK(BM_LogPartition)->Args({64, 2})->Args({256, 4})->Args({512, 8});

void BM_FieldDerivative(benchmark::State& st) {
  const HoleConfig c = config(st.range(0), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(emergent_field_derivative(c, 0));
}
BENCHMARK(BM_FieldDerivative)->Args({64, 2})->Args({256, 4});

void BM_FieldIntegral(benchmark::State& st) {
  const HoleConfig c = config(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(emergent_field_integral(c, 0));
}
BENCHMARK(BM_FieldIntegral)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_PlasmaSweep(benchmark::State& st) {
  PlasmaConfig c;
  c.N = st.range(0);
  c.b = static_cast<double>(c.N);
  PlasmaChain chain(c);
  for (auto _ : st) benchmark::DoNotOptimize(chain.sweep());
}
BENCHMARK(BM_PlasmaSweep)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
