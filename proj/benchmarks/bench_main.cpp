#include <benchmark/benchmark.h>

#include <random>

#include "ptomo/channel.hpp"
#include "ptomo/design.hpp"
#include "ptomo/estimate.hpp"
#include "ptomo/harness.hpp"
#include "ptomo/solver.hpp"

using namespace ptomo;

namespace {

void BM_ChoiQubit(benchmark::State& state) {
  const auto ch = PauliChannel::standard(Vec3(0.3, -0.1, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(choi(ch));
}
BENCHMARK(BM_ChoiQubit);

void BM_ChoiQutrit(benchmark::State& state) {
  RVector l(4);
  l << 0.1, -0.2, 0.05, 0.2;
  const GenPauliChannel ch(standard_mub(3), l);
  for (auto _ : state) benchmark::DoNotOptimize(choi(ch));
}
BENCHMARK(BM_ChoiQutrit);

void BM_DykstraCptp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 g(1);
  std::normal_distribution<double> n;
  CMatrix h(d * d, d * d);
  for (int i = 0; i < d * d; ++i) {
    for (int j = 0; j < d * d; ++j) h(i, j) = {n(g), n(g)};
  }
  h = (h + h.adjoint()).eval() / 2.0;
  SolverSettings s;
  s.max_iters = 100000;
  for (auto _ : state) benchmark::DoNotOptimize(dykstra_cptp(h, d, s));
}
BENCHMARK(BM_DykstraCptp)->Arg(2)->Arg(3);

void BM_PgdLs(benchmark::State& state) {
  RMatrix a(3, 3);
  a << 3.0, 0.5, -0.2, 0.5, 2.0, 0.1, -0.2, 0.1, 1.5;
  RVector b(3);
  b << -2.5, 0.7, 1.1;
  const QuadraticObjective q{a, b};
  const auto set = qubit_cptp_constraints();
  const SolverSettings s;
  for (auto _ : state) benchmark::DoNotOptimize(pgd_ls(q, set, s));
}
BENCHMARK(BM_PgdLs);

void BM_EstimateAffine(benchmark::State& state) {
  const ChannelSpec spec{Vec3(0.3, -0.1, 0.1), standard_mub(2)};
  const auto cs = strategy_configs(spec, Strategy::kOptimal, 1000);
  Rng rng = make_rng(5);
  const auto ch = spec.channel();
  const auto rec = simulate_record(cs, [&ch](const CMatrix& x) { return ch.apply(x); }, rng);
  const auto basis = affine_basis_qubit();
  const auto set = qubit_cptp_constraints();
  const SolverSettings s;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_affine(basis, set, cs, rec, s));
}
BENCHMARK(BM_EstimateAffine);

void BM_FisherTraceQutrit(benchmark::State& state) {
  const Mub m3 = standard_mub(3);
  RVector l(4);
  l << 0.1, -0.2, 0.05, 0.2;
  const GenPauliChannel ch(m3, l);
  const auto cs = strategy_configs(ChannelSpec{l, m3}, Strategy::kQutritOptimal, 1);
  const auto basis = affine_basis_qutrit(m3);
  for (auto _ : state) benchmark::DoNotOptimize(fisher_trace(basis, l, cs));
}
BENCHMARK(BM_FisherTraceQutrit);

void BM_DesignSearchQubit(benchmark::State& state) {
  const GenPauliChannel ch(standard_mub(2), RVector(Vec3(0.3, -0.1, 0.1)));
  for (auto _ : state) {
    Rng rng = make_rng(3);
    benchmark::DoNotOptimize(search_optimal_configs(ch, 1, rng));
  }
}
BENCHMARK(BM_DesignSearchQubit)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged libbenchmark_main.a holds LTO bytecode from another compiler
// release, so main comes from here.
BENCHMARK_MAIN();
