#include <benchmark/benchmark.h>

#include "advest/aggregators.hpp"
#include "advest/estimator.hpp"
#include "advest/recoverability.hpp"
#include "advest/simplex.hpp"

using namespace advest;

namespace {

Matrix paths() {
  Matrix A(7, 4);
  A << 2, 0, 0, 1, 2, 1, 0, 0, 2, 0, 1, 0, 2, 1, 0, 1, 2, 1, 1, 0, 2, 0, 1, 1, 2, 1, 1, 1;
  return A;
}

Matrix gaussian_matrix(Index r, Index c, std::uint64_t seed) {
  RandomSource rng(seed, 0);
  return Matrix::NullaryExpr(r, c, [&](Index, Index) { return rng.normal(); });
}

void BM_L1Fit(benchmark::State& state) {
  const Index N = state.range(0);
  const Matrix A = gaussian_matrix(N, 4, 1);
  const Matrix U = Matrix::Identity(4, 4).leftCols(2), V = Matrix::Identity(4, 4).rightCols(2);
  Vector y = A * Vector::Ones(4);
  y(0) += 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(l1_fit(A, U, V, y));
}
BENCHMARK(BM_L1Fit)->Arg(8)->Arg(32)->Arg(128);

void BM_EtaExact(benchmark::State& state) {
  const Matrix A = paths();
  EtaOptions o;
  o.method = EtaMethod::Exact;
  for (auto _ : state) benchmark::DoNotOptimize(compute_eta(A, 1, o));
}
BENCHMARK(BM_EtaExact)->Unit(benchmark::kMillisecond);

void BM_EtaMultistart(benchmark::State& state) {
  const Matrix A = paths();
  EtaOptions o;
  o.method = EtaMethod::Multistart;
  for (auto _ : state) benchmark::DoNotOptimize(compute_eta(A, 1, o));
}
BENCHMARK(BM_EtaMultistart)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  const Rule rule = static_cast<Rule>(state.range(0));
  RandomSource rng(2, 0);
  std::vector<Vector> vs;
  for (int i = 0; i < 7; ++i) vs.push_back(Vector::NullaryExpr(4, [&](Index) { return rng.normal(); }));
  state.SetLabel(to_string(rule));
  for (auto _ : state) benchmark::DoNotOptimize(aggregate(rule, vs, 1));
}
BENCHMARK(BM_Aggregate)->DenseRange(0, 4);

void BM_EstimatorStep(benchmark::State& state) {
  SensingProblem p;
  p.A = paths();
  p.mu_true = (Vector(4) << 5.47, 7.88, 11.51, 13.58).finished();
  p.sigma = 100.0;
  p.m = 1;
  p.adversaries = {6};
  const BoxProjection box = BoxProjection::uniform(4, 0, 30);
  const auto sched = StepsizeSchedule::decay_decay();
  const AttackSpec attack = AttackSpec::baruch();
  TrialStreams streams = TrialStreams::make(1, 0, 7);
  EstimatorState s = EstimatorState::initial(p, box, 0);
  const bool sync = state.range(0) == 1;
  state.SetLabel(sync ? "sync" : "async");
  for (auto _ : state) {
    if (sync) {
      sync_step(s, p, sched, box, attack, streams);
    } else {
      async_step(s, p, sched, box, attack, streams);
    }
  }
  benchmark::DoNotOptimize(s.x);
}
BENCHMARK(BM_EstimatorStep)->Arg(0)->Arg(1);

}  // namespace
BENCHMARK_MAIN();
