#include <benchmark/benchmark.h>

#include "gridcert/moment.hpp"
#include "gridcert/pipeline.hpp"
#include "gridcert/vset.hpp"

namespace {

using namespace gridcert;

GridModel chain(int n_pq) {
  std::vector<BranchSpec> branches;
  for (int j = 0; j < n_pq; ++j)
    branches.push_back(BranchSpec{j, j + 1, Complex{2.0, -6.0}, 0.0, {}});
  return GridModel::build(branches, n_pq, Complex{1.0, 0.0});
}

UncertaintySet singleton_zero(int n) {
  UncertaintySet set;
  for (int j = 0; j < n; ++j)
    set.regions.push_back(PowerRegion::singleton(Complex{0.0, 0.0}));
  return set;
}

void BM_P1Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = chain(n);
  const auto spec = SecuritySpec::uniform(model, 0.9, 1.1, 5.0);
  const auto aux = AuxBounds::make(model, spec, 1.0, Vec::Ones(n), 0.3);
  const auto problem = formulate_P1(model, aux, 0, 0, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve(problem));
}
BENCHMARK(BM_P1Solve)->Arg(2)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MomentBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = chain(n);
  const auto spec = SecuritySpec::uniform(model, 0.9, 1.1, 5.0);
  const auto aux = AuxBounds::make(model, spec, 1.0, Vec::Ones(n), 0.3);
  const auto vs = assemble_V(model, spec, aux);
  const auto prog = formulate_P0(model, vs, 0, singleton_zero(n));
  const auto dec = correlative_sparsity(prog);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_moment_sdp(prog, dec, 2));
}
BENCHMARK(BM_MomentBuild)->Arg(2)->Arg(6)->Arg(12)
    ->Unit(benchmark::kMillisecond);

void BM_P0Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = chain(n);
  const auto spec = SecuritySpec::uniform(model, 0.9, 1.1, 5.0);
  const auto aux = AuxBounds::make(model, spec, 1.0, Vec::Ones(n), 0.3);
  const auto vs = assemble_V(model, spec, aux);
  const auto prog = formulate_P0(model, vs, 0, singleton_zero(n));
  const auto sdp = build_moment_sdp(prog, correlative_sparsity(prog), 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve(sdp.problem));
}
BENCHMARK(BM_P0Solve)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
