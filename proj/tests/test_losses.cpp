#include <doctest.h>

#include <cmath>

#include "omdlab/losses.hpp"
#include "support/oracles.hpp"

using namespace omdlab;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("loss oracle values and gradients") {
  const LossOracle lin = LossOracle::linear(vec2(1.0, -1.0));
  CHECK(lin.value(vec2(0.5, 0.5)) == doctest::Approx(0.0));
  CHECK(lin.grad(vec2(0.5, 0.5)).isApprox(vec2(1.0, -1.0)));

  const LossOracle quad = LossOracle::quadratic(vec2(1.0, 1.0), 1.0);
  CHECK(quad.value(vec2(0.5, 0.5)) == doctest::Approx(0.0));
  CHECK(quad.grad(vec2(0.5, 0.5)).norm() == doctest::Approx(0.0));

  const LossOracle rep = LossOracle::reparameterized(LossOracle::linear(vec2(1.0, 0.0)),
                                                     Reparameterization::quarter_square());
  CHECK(rep.value(vec2(2.0, 2.0)) == doctest::Approx(1.0));
  CHECK(rep.grad(vec2(2.0, 2.0)).isApprox(vec2(1.0, 0.0), 1e-12));
  CHECK(grad_check(rep, vec2(2.0, 2.0), 1e-6) < 1e-5);

  CHECK_THROWS_AS(lin.value(Vec::Zero(3)), invalid_input);
}

TEST_CASE("grad_check tolerances") {
  const LossOracle lin = LossOracle::linear(vec2(0.3, -2.0));
  CHECK(grad_check(lin, vec2(0.4, 0.1), 1e-6) <= 1e-9);
  const LossOracle quad = LossOracle::quadratic(vec2(1.0, 2.0), 0.5);
  CHECK(grad_check(quad, vec2(0.3, 0.4), 1e-6) <= 1e-6);
  CHECK_THROWS_AS(grad_check(lin, vec2(0.1, 0.1), 0.0), invalid_input);
}

TEST_CASE("sequence generators") {
  const Domain simplex = Domain::smoothed_simplex(3, 1e-3);

  SUBCASE("alternating signs") {
    LossSequenceSpec spec;
    spec.kind = SequenceKind::AlternatingLinear;
    spec.horizon = 4;
    spec.grad_bound = 2.0;
    const LossSequence seq = make_sequence(spec, simplex);
    Vec c0 = Vec::Zero(3);
    c0[0] = 2.0;
    for (int t = 1; t <= 4; ++t) {
      const double sign = (t % 2 == 0) ? 1.0 : -1.0;
      CHECK(seq.at(t).grad(domain_center(simplex)).isApprox(sign * c0, 1e-12));
    }
  }

  SUBCASE("random linear replays bit for bit") {
    LossSequenceSpec spec;
    spec.kind = SequenceKind::RandomLinear;
    spec.horizon = 50;
    spec.seed = 0;
    const LossSequence a = make_sequence(spec, simplex);
    const LossSequence b = make_sequence(spec, simplex);
    for (int t = 1; t <= 50; ++t) {
      CHECK(a.at(t).coeff() == b.at(t).coeff());  // exact equality
      CHECK(a.at(t).coeff().norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(a.id == b.id);
  }

  SUBCASE("fixed quadratic emits one oracle") {
    LossSequenceSpec spec;
    spec.kind = SequenceKind::FixedQuadratic;
    spec.horizon = 5;
    Vec a(3);
    a << 1.0, 1.0, 1.0;
    spec.quad_a = a;
    spec.quad_b = 0.6;
    const LossSequence seq = make_sequence(spec, simplex);
    const Vec x = domain_center(simplex);
    for (int t = 2; t <= 5; ++t) CHECK(seq.at(t).value(x) == seq.at(1).value(x));
  }

  SUBCASE("invalid specs are rejected") {
    LossSequenceSpec spec;
    spec.horizon = 0;
    CHECK_THROWS_AS(make_sequence(spec, simplex), config_error);
    spec.horizon = 5;
    spec.grad_bound = 0.0;
    CHECK_THROWS_AS(make_sequence(spec, simplex), config_error);
  }
}

TEST_CASE("gradient bound holds over the domain") {
  const Domain simplex = Domain::smoothed_simplex(3, 1e-3);
  Rng rng(51);
  for (SequenceKind kind : {SequenceKind::RandomLinear, SequenceKind::FixedLinear,
                            SequenceKind::AlternatingLinear, SequenceKind::FixedQuadratic}) {
    LossSequenceSpec spec;
    spec.kind = kind;
    spec.horizon = 20;
    spec.grad_bound = 1.5;
    spec.seed = 9;
    const LossSequence seq = make_sequence(spec, simplex);
    for (int t = 1; t <= seq.horizon(); ++t) {
      for (int s = 0; s < 50; ++s) {
        const Vec x = sample_interior(simplex, rng, 0.0);
        CHECK(seq.at(t).grad(x).norm() <= 1.5 + 1e-9);
      }
    }
  }
}

TEST_CASE("convexity certificate for linear and quadratic oracles") {
  Rng rng(53);
  const LossOracle lin = LossOracle::linear(vec2(0.7, -0.2));
  const LossOracle quad = LossOracle::quadratic(vec2(1.0, 0.5), 0.3, 0.8);
  for (int i = 0; i < 500; ++i) {
    const Vec x = rng.uniform_vec(2, -1.0, 1.0);
    const Vec y = rng.uniform_vec(2, -1.0, 1.0);
    const double alpha = rng.next_double();
    for (const auto& f : {lin, quad}) {
      const double lhs = f.value(alpha * x + (1.0 - alpha) * y);
      const double rhs = alpha * f.value(x) + (1.0 - alpha) * f.value(y);
      CHECK(lhs <= rhs + 1e-9);
    }
  }
}

TEST_CASE("reparameterized value consistency") {
  const auto qs = Reparameterization::quarter_square();
  const LossOracle inner = LossOracle::quadratic(vec2(1.0, 1.0), 0.6, 0.9);
  const LossOracle rep = LossOracle::reparameterized(inner, qs);
  Rng rng(59);
  for (int i = 0; i < 200; ++i) {
    const Vec u = rng.uniform_vec(2, 0.1, 1.9);
    CHECK(rep.value(u) == inner.value(qs.forward(u)));  // same evaluation path
    CHECK(grad_check(rep, u, 1e-6) < 1e-5);
  }
}
