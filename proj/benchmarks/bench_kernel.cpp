#include <benchmark/benchmark.h>

#include "bergman/convexity.hpp"
#include "bergman/families.hpp"
#include "bergman/kernel.hpp"
#include "bergman/quadrature.hpp"

namespace {

using bergman::Complex;
using bergman::ConvexDomain;
using bergman::KernelApprox;
using bergman::Weight;

const ConvexDomain& square() {
  static const auto d = ConvexDomain::rectangle(-1, 1, -1, 1);
  return d;
}

void BM_QuadratureRule(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bergman::rule_for(square(), degree));
  state.counters["nodes"] = static_cast<double>(bergman::rule_for(square(), degree).size());
}
BENCHMARK(BM_QuadratureRule)->Arg(20)->Arg(42)->Arg(82);

void BM_KernelBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(KernelApprox::build(square(), Weight::zero(), n));
}
BENCHMARK(BM_KernelBuild)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_KernelBuildMaxAffine(benchmark::State& state) {
  const auto w = Weight::max_affine({{2.0, 0.0, -1.0}, {0.0, 0.0, 0.0}, {0.0, -1.0, -0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(KernelApprox::build(square(), w, 20));
}
BENCHMARK(BM_KernelBuildMaxAffine)->Unit(benchmark::kMillisecond);

void BM_KernelEval(benchmark::State& state) {
  const auto k = KernelApprox::build(square(), Weight::modulus_squared(1.0), static_cast<int>(state.range(0)));
  const Complex z{0.3, -0.2};
  for (auto _ : state) benchmark::DoNotOptimize(k.eval(z));
}
BENCHMARK(BM_KernelEval)->Arg(20)->Arg(40);

void BM_ConvexityProbe(benchmark::State& state) {
  const auto k = KernelApprox::build(square(), Weight::zero(), 20);
  bergman::ConvexProbeOptions o;
  o.segments = 50;
  o.margin = k.boundary_offset();
  o.seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(bergman::check_convex([&k](Complex z) { return std::log(k.eval(z)); }, square(), o));
}
BENCHMARK(BM_ConvexityProbe)->Unit(benchmark::kMillisecond);

void BM_FamilySweep(benchmark::State& state) {
  const auto family = bergman::FiberedFamily::norm_ball(1.0);
  std::vector<Complex> ts;
  for (int i = 0; i < 16; ++i) ts.emplace_back(0.04 * i, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(bergman::kernel_sweep(family, ts, 20));
}
BENCHMARK(BM_FamilySweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
