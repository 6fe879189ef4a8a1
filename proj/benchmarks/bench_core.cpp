#include <benchmark/benchmark.h>

#include "omdlab/harness.hpp"

using namespace omdlab;

namespace {

void BM_BregmanProjectSimplex(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Domain simplex = Domain::smoothed_simplex(d, 1e-3);
  const Regularizer entropy = Regularizer::neg_entropy();
  Rng rng(1);
  const Vec y = rng.uniform_vec(d, 0.2, 1.2);  // infeasible: forces the bisection
  for (auto _ : state) {
    benchmark::DoNotOptimize(bregman_project(entropy, simplex, y).point);
  }
}
BENCHMARK(BM_BregmanProjectSimplex)->Arg(5)->Arg(50)->Arg(500);

void BM_EuclidProjectBall(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Domain ball = Domain::positive_ball(d, 8.0 / 3.0, 4.0 / 3.0);
  Rng rng(2);
  const Vec v = rng.uniform_vec(d, -0.5, 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(euclid_project(ball, v).point);
  }
}
BENCHMARK(BM_EuclidProjectBall)->Arg(5)->Arg(50);

void BM_OmdStepEg(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GeometryPair pair = make_eg_pair(d);
  Rng rng(3);
  const OmdState s{domain_center(pair.primal), 0.05, 1};
  const Vec g = rng.in_ball(d, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(omd_step(pair, s, g).next.x);
  }
}
BENCHMARK(BM_OmdStepEg)->Arg(5)->Arg(50)->Arg(500);

void BM_CoupledStepDistance(benchmark::State& state) {
  const GeometryPair pair = make_eg_pair(static_cast<int>(state.range(0)));
  Rng rng(4);
  const Vec x = sample_interior(pair.primal, rng, 0.05);
  const Vec g = rng.in_ball(pair.primal.dim(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coupled_step_distance(pair, x, g, 0.01));
  }
}
BENCHMARK(BM_CoupledStepDistance)->Arg(5)->Arg(50);

void BM_ReconstructLink(benchmark::State& state) {
  const auto q = Reparameterization::quarter_square();
  const ScalarMap map = scalar_map(q, q.inverse1(0.01), q.inverse1(1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reconstruct_link(map, 1e-3).values.back());
  }
}
BENCHMARK(BM_ReconstructLink);

void BM_RunLearnerEg(benchmark::State& state) {
  const GeometryPair pair = make_eg_pair(5);
  LossSequenceSpec spec;
  spec.kind = SequenceKind::RandomLinear;
  spec.horizon = static_cast<int>(state.range(0));
  spec.seed = 5;
  const LossSequence losses = make_sequence(spec, pair.primal);
  RunConfig config;
  config.kind = LearnerKind::Eg;
  config.eta = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_learner(pair, losses, config).steps.size());
  }
}
BENCHMARK(BM_RunLearnerEg)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
