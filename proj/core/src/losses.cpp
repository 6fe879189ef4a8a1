#include "omdlab/losses.hpp"

#include <cmath>
#include <sstream>

namespace omdlab {

LossOracle LossOracle::linear(Vec c) {
  require_finite(c, "linear loss c");
  LossOracle f;
  f.kind_ = LossKind::Linear;
  f.dim_ = static_cast<int>(c.size());
  f.c_ = std::move(c);
  return f;
}

LossOracle LossOracle::quadratic(Vec a, double b, double scale) {
  require_finite(a, "quadratic loss a");
  if (!(scale > 0.0)) throw config_error("quadratic loss needs scale > 0");
  LossOracle f;
  f.kind_ = LossKind::Quadratic;
  f.dim_ = static_cast<int>(a.size());
  f.c_ = std::move(a);
  f.b_ = b;
  f.scale_ = scale;
  return f;
}

LossOracle LossOracle::reparameterized(LossOracle inner, Reparameterization q) {
  LossOracle f;
  f.kind_ = LossKind::Reparameterized;
  f.dim_ = inner.dim();
  f.inner_ = std::make_shared<const LossOracle>(std::move(inner));
  f.map_ = std::make_shared<const Reparameterization>(q);
  return f;
}

double LossOracle::value(const Vec& x) const {
  require_finite(x, "loss value");
  if (x.size() != dim_) throw invalid_input("loss value: dimension mismatch");
  switch (kind_) {
    case LossKind::Linear: return c_.dot(x);
    case LossKind::Quadratic: {
      const double r = c_.dot(x) - b_;
      return scale_ * r * r;
    }
    case LossKind::Reparameterized: return inner_->value(map_->forward(x));
  }
  return 0.0;
}

Vec LossOracle::grad(const Vec& x) const {
  require_finite(x, "loss grad");
  if (x.size() != dim_) throw invalid_input("loss grad: dimension mismatch");
  switch (kind_) {
    case LossKind::Linear: return c_;
    case LossKind::Quadratic: return (2.0 * scale_ * (c_.dot(x) - b_)) * c_;
    case LossKind::Reparameterized:
      return chain_gradient(*map_, x, inner_->grad(map_->forward(x)));
  }
  return Vec();
}

SequenceKind parse_sequence_kind(const std::string& name) {
  if (name == "linear" || name == "random-linear") return SequenceKind::RandomLinear;
  if (name == "fixed-linear") return SequenceKind::FixedLinear;
  if (name == "alternating" || name == "alternating-linear") return SequenceKind::AlternatingLinear;
  if (name == "quadratic" || name == "fixed-quadratic") return SequenceKind::FixedQuadratic;
  throw config_error("unknown loss kind '" + name + "'");
}

std::string sequence_kind_name(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::RandomLinear: return "random-linear";
    case SequenceKind::FixedLinear: return "fixed-linear";
    case SequenceKind::AlternatingLinear: return "alternating-linear";
    case SequenceKind::FixedQuadratic: return "fixed-quadratic";
  }
  return "?";
}

namespace {

Vec default_spread_direction(int d) {
  Vec v(d);
  if (d == 1) {
    v[0] = 1.0;
    return v;
  }
  for (int i = 0; i < d; ++i) v[i] = 1.0 - 2.0 * static_cast<double>(i) / (d - 1);
  return v;
}

}  // namespace

LossSequence make_sequence(const LossSequenceSpec& spec, const Domain& domain) {
  if (spec.horizon < 1) throw config_error("make_sequence: need horizon T >= 1");
  if (!(spec.grad_bound > 0.0)) throw config_error("make_sequence: need grad_bound G_F > 0");
  const int d = domain.dim();
  const double gf = spec.grad_bound;

  LossSequence seq;
  seq.spec = spec;
  seq.oracles.reserve(static_cast<size_t>(spec.horizon));

  switch (spec.kind) {
    case SequenceKind::RandomLinear: {
      for (int t = 1; t <= spec.horizon; ++t) {
        Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(t));
        seq.oracles.push_back(LossOracle::linear(rng.on_sphere(d, gf)));
      }
      break;
    }
    case SequenceKind::FixedLinear: {
      Vec c0 = spec.direction.value_or(default_spread_direction(d));
      if (c0.size() != d) throw config_error("fixed-linear: direction dimension mismatch");
      c0 *= gf / c0.norm();
      for (int t = 1; t <= spec.horizon; ++t) seq.oracles.push_back(LossOracle::linear(c0));
      break;
    }
    case SequenceKind::AlternatingLinear: {
      Vec c0 = spec.direction.value_or(Vec(Vec::Unit(d, 0)));
      if (c0.size() != d) throw config_error("alternating-linear: direction dimension mismatch");
      c0 *= gf / c0.norm();
      for (int t = 1; t <= spec.horizon; ++t) {
        const double sign = (t % 2 == 0) ? 1.0 : -1.0;  // (-1)^t
        seq.oracles.push_back(LossOracle::linear(sign * c0));
      }
      break;
    }
    case SequenceKind::FixedQuadratic: {
      const Vec a = spec.quad_a.value_or(Vec(Vec::Ones(d)));
      if (a.size() != d) throw config_error("fixed-quadratic: a dimension mismatch");
      const double b = spec.quad_b.value_or(0.6);
      // Enforce the gradient bound over the whole domain by scaling against
      // the worst-case residual of the inner linear form.
      const double hi = linear_max_bound(domain, a);
      const double lo = -linear_max_bound(domain, Vec(-a));
      const double residual = std::max(std::abs(hi - b), std::abs(lo - b));
      const double sup_grad = 2.0 * residual * a.norm();
      const double scale = sup_grad > 0.0 ? gf / sup_grad : 1.0;
      const LossOracle f = LossOracle::quadratic(a, b, scale);
      // Sampled verification of the bound.
      Rng rng = Rng::stream(spec.seed, 0xabcd);
      for (int s = 0; s < 1000; ++s) {
        if (f.grad(sample_interior(domain, rng, 0.0)).norm() > gf + 1e-9)
          throw numerical_error("fixed-quadratic: gradient bound violated after rescaling");
      }
      for (int t = 1; t <= spec.horizon; ++t) seq.oracles.push_back(f);
      break;
    }
  }

  std::ostringstream id;
  id << sequence_kind_name(spec.kind) << ";T=" << spec.horizon << ";gf=" << gf
     << ";seed=" << spec.seed << ";dom=" << domain.describe();
  seq.id = id.str();
  return seq;
}

double grad_check(const LossOracle& oracle, const Vec& x, double h) {
  if (!(h > 0.0)) throw invalid_input("grad_check: need h > 0");
  const Vec g = oracle.grad(x);
  double worst = 0.0;
  Vec xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double fd = (oracle.value(xp) - oracle.value(xm)) / (2.0 * h);
    worst = std::max(worst, std::abs(g[i] - fd) / (1.0 + std::abs(g[i])));
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return worst;
}

}  // namespace omdlab
