#include <benchmark/benchmark.h>

#include "gapforge/dmrg.hpp"
#include "gapforge/exact.hpp"
#include "gapforge/layer_operator.hpp"
#include "gapforge/mpo.hpp"
#include "gapforge/numeric.hpp"

using namespace gapforge;

namespace {

Group group_arg(int64_t g) { return g == 0 ? Group::Unitary : g == 1 ? Group::Orthogonal : Group::Symplectic; }

void BM_ApplyLayer(benchmark::State& st) {
  const LayerOperator op({2, 1, static_cast<int>(st.range(1)), Boundary::Closed, group_arg(st.range(0))});
  const Eigen::VectorXd v = Eigen::VectorXd::Random(op.dimension());
  for (auto _ : st) benchmark::DoNotOptimize(apply_layer(op, v));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(op.dimension()));
}
BENCHMARK(BM_ApplyLayer)->Args({0, 12})->Args({0, 16})->Args({1, 10})->Args({2, 10})->Unit(benchmark::kMillisecond);

void BM_PairedMpoApply(benchmark::State& st) {
  const MpoOperator mpo = build_paired_mpo({2, 1, static_cast<int>(st.range(1)), Boundary::Closed, group_arg(st.range(0))});
  const Eigen::VectorXd v = Eigen::VectorXd::Random(mpo.dimension());
  for (auto _ : st) benchmark::DoNotOptimize(mpo.apply(v));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(mpo.dimension()));
}
BENCHMARK(BM_PairedMpoApply)->Args({0, 24})->Args({0, 32})->Args({1, 16})->Unit(benchmark::kMillisecond);

void BM_DenseGap(benchmark::State& st) {
  const CircuitSpec spec{2, 1, static_cast<int>(st.range(0)), Boundary::Closed, Group::Unitary};
  for (auto _ : st) benchmark::DoNotOptimize(dense_gap(spec).lambda);
}
BENCHMARK(BM_DenseGap)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_IterativeGap(benchmark::State& st) {
  const CircuitSpec spec{2, 1, static_cast<int>(st.range(0)), Boundary::Closed, Group::Unitary};
  for (auto _ : st) benchmark::DoNotOptimize(iterative_gap(spec).lambda);
}
BENCHMARK(BM_IterativeGap)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Dmrg(benchmark::State& st) {
  DmrgConfig cfg;
  cfg.chi = static_cast<int>(st.range(1));
  const CircuitSpec spec{2, 1, static_cast<int>(st.range(0)), Boundary::Open, Group::Unitary};
  for (auto _ : st) benchmark::DoNotOptimize(dmrg_gap(spec, cfg).gap.lambda);
}
BENCHMARK(BM_Dmrg)->Args({24, 16})->Args({40, 32})->Unit(benchmark::kMillisecond);

void BM_FormulaGap(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(exact_gap(2, 1, 1000, Boundary::Closed).lambda);
}
BENCHMARK(BM_FormulaGap);

}  // namespace
BENCHMARK_MAIN();
