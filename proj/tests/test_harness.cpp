#include <doctest.h>

#include <cmath>

#include "omdlab/harness.hpp"
#include "support/oracles.hpp"

using namespace omdlab;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

LossSequence linear_sequence(const Domain& domain, const Vec& c, int horizon) {
  LossSequenceSpec spec;
  spec.kind = SequenceKind::FixedLinear;
  spec.horizon = horizon;
  spec.grad_bound = c.norm();
  spec.direction = c;
  return make_sequence(spec, domain);
}

}  // namespace

TEST_CASE("slope fit recovers synthetic exponents") {
  std::vector<double> xs, ys;
  for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    xs.push_back(x);
    ys.push_back(std::pow(x, 1.5));
  }
  const SlopeFit fit = fit_loglog(xs, ys);
  CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(fit.residual_rms < 1e-12);

  CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, 2.0}), invalid_input);
  CHECK_THROWS_AS(fit_loglog({1.0, 1.0, 2.0}, {1.0, 2.0, 3.0}), invalid_input);
  CHECK_THROWS_AS(fit_loglog({1.0, 2.0, 3.0}, {1.0, 0.0, 3.0}), invalid_input);
}

TEST_CASE("theorem step size") {
  CHECK(step_size_theorem(1000, 1.0, 2.0, 1.0) == doctest::Approx(9.921e-4).epsilon(1e-4));
  CHECK(std::abs(step_size_theorem(1000, 1.0, 2.0, 1.0) - 9.921e-4) < 1e-7);
  const double base = step_size_theorem(1000, 1.0, 2.0, 1.0);
  CHECK(step_size_theorem(1000, 8.0, 2.0, 1.0) == doctest::Approx(4.0 * base));
  CHECK(step_size_theorem(8000, 1.0, 2.0, 1.0) == doctest::Approx(base / 4.0));
  CHECK_THROWS_AS(step_size_theorem(1000, 1.0, 0.9, 1.0), invalid_input);
  CHECK_THROWS_AS(step_size_theorem(0.0, 1.0, 2.0, 1.0), invalid_input);
}

TEST_CASE("comparator on a linear program over the smoothed simplex") {
  const GeometryPair pair = make_eg_pair(2, 0.01);
  const LossSequence losses = linear_sequence(pair.primal, vec2(1.0, -1.0), 10);
  const ComparatorResult comp = compute_comparator(losses, pair);
  CHECK(comp.certified);
  CHECK(comp.value == doctest::Approx(-9.8).epsilon(1e-5));
  CHECK(comp.point[0] == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(comp.point[1] == doctest::Approx(0.99).epsilon(1e-3));

  // Vertex-enumeration oracle.
  double best = 1e300;
  for (const auto& v : oracles::simplex_vertices(2, 0.01)) {
    double total = 0.0;
    for (int t = 1; t <= 10; ++t) total += losses.at(t).value(v);
    best = std::min(best, total);
  }
  CHECK(comp.value == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("comparator trivial cases") {
  const GeometryPair pair = make_eg_pair(2, 0.01);
  SUBCASE("all-zero losses") {
    const LossSequence zeros = linear_sequence(pair.primal, vec2(1.0, 1.0), 5);
    LossSequence patched = zeros;
    for (auto& f : patched.oracles) f = LossOracle::linear(Vec::Zero(2));
    const ComparatorResult comp = compute_comparator(patched, pair);
    CHECK(comp.value == doctest::Approx(0.0));
    CHECK(comp.certified);
  }
  SUBCASE("feasible-root quadratic attains zero") {
    LossSequenceSpec spec;
    spec.kind = SequenceKind::FixedQuadratic;
    spec.horizon = 1;
    Vec a(2);
    a << 1.0, 1.0;
    spec.quad_a = a;
    spec.quad_b = 0.6;
    const LossSequence seq = make_sequence(spec, pair.primal);
    const ComparatorResult comp = compute_comparator(seq, pair);
    CHECK(comp.certified);
    CHECK(comp.value == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("regret accounting") {
  const GeometryPair pair = make_eg_pair(2, 0.01);
  const LossSequence losses = linear_sequence(pair.primal, vec2(1.0, -1.0), 10);
  const ComparatorResult comp = compute_comparator(losses, pair);

  RunConfig config;
  config.kind = LearnerKind::Omd;
  config.eta = 0.2;
  const RunTrace trace = run_learner(pair, losses, config);
  const RegretReport report = regret_of_trace(trace, comp);
  CHECK(report.regret == doctest::Approx(trace.cumulative_loss() - comp.value));
  CHECK(report.regret >= -report.slack);

  const LossSequence other = linear_sequence(pair.primal, vec2(0.0, 1.0), 10);
  const ComparatorResult comp2 = compute_comparator(other, pair);
  CHECK_THROWS_AS(regret_of_trace(trace, comp2), invalid_input);
}

TEST_CASE("constants estimation") {
  SUBCASE("euclidean pair with unit-norm linear losses") {
    const GeometryPair pair = make_euclidean_pair(2);
    LossSequenceSpec spec;
    spec.kind = SequenceKind::RandomLinear;
    spec.horizon = 30;
    spec.grad_bound = 1.0;
    const LossSequence losses = make_sequence(spec, pair.primal);
    const ConstantsReport report = estimate_constants(pair, &losses, 500, 3);
    CHECK(report.grad_bound == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.bregman_diameter <= 2.0 / 2.0 + 1e-9);
    CHECK(report.q_first <= 1.0 + 1e-12);
    CHECK(report.q_inv_first <= 1.0 + 1e-12);
    CHECK(report.q_inv_second <= 1e-12);
  }
  SUBCASE("entropy diameter shrinks as the floor rises") {
    const ConstantsReport tight = estimate_constants(make_eg_pair(3, 1e-1), nullptr, 400, 5);
    const ConstantsReport loose = estimate_constants(make_eg_pair(3, 1e-3), nullptr, 400, 5);
    CHECK(tight.bregman_diameter < loose.bregman_diameter);
  }
  CHECK_THROWS_AS(estimate_constants(make_euclidean_pair(2), nullptr, 50), invalid_input);
}

TEST_CASE("closeness sweep input validation and degenerate pair") {
  const GeometryPair euc = make_euclidean_pair(2);
  const ClosenessResult flat = closeness_sweep(euc, {1e-1, 1e-2, 1e-3}, 20, 1);
  CHECK_FALSE(flat.fit.has_value());
  for (double d : flat.max_distances) CHECK(d <= 1e-12);

  CHECK_THROWS_AS(closeness_sweep(euc, {0.0, 1e-2, 1e-3}, 10, 1), invalid_input);
  CHECK_THROWS_AS(closeness_sweep(euc, {1e-1, 1e-2}, 10, 1), invalid_input);
  CHECK_THROWS_AS(closeness_sweep(euc, {1e-1, 8e-2, 6e-2}, 10, 1), invalid_input);
}

TEST_CASE("flow check basics") {
  const GeometryPair pair = make_eg_pair(2);
  LossSequenceSpec spec;
  spec.kind = SequenceKind::FixedQuadratic;
  spec.horizon = 1;
  const LossSequence fixed = make_sequence(spec, pair.primal);

  SUBCASE("zero horizon gives zero deviation") {
    const FlowCheckResult r = flow_check(pair, fixed.at(1), 0.0, {1e-2, 5e-3, 2.5e-3});
    for (double dev : r.deviations) CHECK(dev == 0.0);
  }
  SUBCASE("identity pair trajectories coincide") {
    const GeometryPair euc = make_euclidean_pair(2);
    LossSequenceSpec espec;
    espec.kind = SequenceKind::FixedQuadratic;
    espec.horizon = 1;
    const LossSequence efixed = make_sequence(espec, euc.primal);
    const FlowCheckResult r = flow_check(euc, efixed.at(1), 0.5, {1e-2, 5e-3, 2.5e-3});
    for (double dev : r.deviations) CHECK(dev <= 1e-12);
  }
  SUBCASE("halving the step roughly halves the deviation") {
    const FlowCheckResult r = flow_check(pair, fixed.at(1), 1.0, {1e-2, 5e-3, 2.5e-3});
    CHECK(r.monotone);
    for (double ratio : r.ratios) {
      CHECK(ratio >= 0.3);
      CHECK(ratio <= 0.7);
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(flow_check(pair, fixed.at(1), 1.0, {1e-2, 5e-3}), invalid_input);
    CHECK_THROWS_AS(flow_check(pair, fixed.at(1), 1.0, {1e-3, 5e-3, 1e-2}), invalid_input);
  }
}

TEST_CASE("single-step trace at the comparator point has zero regret") {
  const GeometryPair pair = make_eg_pair(2, 0.01);
  const LossSequence losses = linear_sequence(pair.primal, vec2(1.0, -1.0), 1);
  const ComparatorResult comp = compute_comparator(losses, pair);
  RunTrace trace;
  trace.loss_id = losses.id;
  trace.dim = 2;
  trace.horizon = 1;
  TraceStep step;
  step.t = 1;
  step.x = comp.point;
  step.loss = losses.at(1).value(comp.point);
  trace.steps.push_back(step);
  const RegretReport report = regret_of_trace(trace, comp);
  CHECK(std::abs(report.regret) <= report.slack + 1e-12);
}

TEST_CASE("analytic perturbation envelope shrinks relative to the horizon") {
  // With eta = T^{-1/2} and C ~ eta^2 every term of the bound is O(sqrt(T)),
  // so bound/T must decrease along the horizon table.
  SweepConfig base;
  base.horizons = {50, 100, 200, 400};
  base.eta_rule = EtaRule::Sqrt;
  base.eta_c = 1.0;
  base.reps = 1;
  base.loss_kind = SequenceKind::FixedLinear;
  base.perturbation.kappa = 1.0;
  const GeometryPair pair = make_eg_pair(3);
  const auto results = perturbation_sweep(pair, base, {PerturbationRule::QuadraticEta});
  REQUIRE(results.size() == 1);
  const auto& rr = results.front();
  for (size_t i = 0; i + 1 < rr.sweep.horizons.size(); ++i) {
    CHECK(rr.bound_split[i + 1] / rr.sweep.horizons[i + 1] <
          rr.bound_split[i] / rr.sweep.horizons[i]);
    CHECK(rr.bound_smoothness[i + 1] / rr.sweep.horizons[i + 1] <
          rr.bound_smoothness[i] / rr.sweep.horizons[i]);
  }
}

TEST_CASE("figure distance row equals the coupled one-step distance") {
  FigureConfig config;
  config.horizon = 2;
  const FigureResult result = figure_eg_tracking(config);
  REQUIRE(result.distance.size() == 2);
  CHECK(result.distance[0] == 0.0);  // shared start

  const GeometryPair pair = make_eg_pair(config.d, config.eps_min);
  LossSequenceSpec spec;
  spec.kind = SequenceKind::FixedQuadratic;
  spec.horizon = 1;
  spec.grad_bound = config.grad_bound;
  spec.seed = config.seed;
  const LossSequence losses = make_sequence(spec, pair.primal);
  const Vec x1 = domain_center(pair.primal);
  const double coupled =
      coupled_step_distance(pair, x1, losses.at(1).grad(x1), config.eta);
  CHECK(result.distance[1] == doctest::Approx(coupled).epsilon(1e-12));
}

TEST_CASE("figure tracking stays tight") {
  FigureConfig config;
  const FigureResult result = figure_eg_tracking(config);
  CHECK(result.eg.steps.size() == 200);
  CHECK(result.max_distance <= 0.05 * result.domain_diameter);
  // Identical learners give a zero distance column.
  FigureResult self = result;
  for (size_t i = 0; i < self.eg.steps.size(); ++i) {
    CHECK((result.eg.steps[i].x - result.eg.steps[i].x).norm() == 0.0);
  }
}

TEST_CASE("csv emitters are deterministic and carry the pinned schemas") {
  const GeometryPair pair = make_eg_pair(2);
  LossSequenceSpec spec;
  spec.kind = SequenceKind::RandomLinear;
  spec.horizon = 10;
  spec.seed = 2;
  const LossSequence losses = make_sequence(spec, pair.primal);
  RunConfig config;
  config.kind = LearnerKind::OgdReparam;
  config.eta = 0.1;
  const std::string a = trace_csv(run_learner(pair, losses, config));
  const std::string b = trace_csv(run_learner(pair, losses, config));
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) ==
        "t,loss,grad_norm,perturb_norm,x_0,x_1,u_0,u_1");

  SweepConfig sweep;
  sweep.horizons = {20, 40, 80};
  sweep.eta_rule = EtaRule::Sqrt;
  sweep.eta_c = 0.5;
  sweep.reps = 2;
  sweep.loss_kind = SequenceKind::RandomLinear;
  const SweepResult r1 = regret_sweep(pair, sweep);
  const SweepResult r2 = regret_sweep(pair, sweep);
  CHECK(sweep_csv(r1) == sweep_csv(r2));
  CHECK(sweep_csv(r1).substr(0, sweep_csv(r1).find('\n')) ==
        "T,eta,seed,regret,comparator,certificate");
  for (const auto& cell : r1.cells) {
    CHECK(cell.regret >= -1e-4 * cell.horizon);
  }
}
