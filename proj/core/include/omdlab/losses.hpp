#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omdlab/domains.hpp"
#include "omdlab/geometry.hpp"

namespace omdlab {

enum class LossKind { Linear, Quadratic, Reparameterized };

/// Immutable convex loss oracle exposing value and (sub-)gradient.
///   linear(c)        f(x) = c . x
///   quadratic(a,b,s) f(x) = s (a . x - b)^2, s fixed at construction so the
///                    gradient bound holds over the domain
///   reparameterized  f~(u) = inner(q(u)), gradient via the chain rule
class LossOracle {
 public:
  static LossOracle linear(Vec c);
  static LossOracle quadratic(Vec a, double b, double scale = 1.0);
  static LossOracle reparameterized(LossOracle inner, Reparameterization q);

  LossKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double value(const Vec& x) const;
  Vec grad(const Vec& x) const;

  const Vec& coeff() const { return c_; }   // linear c / quadratic a
  double offset() const { return b_; }
  double scale() const { return scale_; }

 private:
  LossOracle() = default;

  LossKind kind_ = LossKind::Linear;
  int dim_ = 0;
  Vec c_;
  double b_ = 0.0;
  double scale_ = 1.0;
  std::shared_ptr<const LossOracle> inner_;
  std::shared_ptr<const Reparameterization> map_;
};

enum class SequenceKind { RandomLinear, FixedLinear, AlternatingLinear, FixedQuadratic };

SequenceKind parse_sequence_kind(const std::string& name);
std::string sequence_kind_name(SequenceKind kind);

struct LossSequenceSpec {
  SequenceKind kind = SequenceKind::RandomLinear;
  int horizon = 0;
  double grad_bound = 1.0;  // G_F
  std::uint64_t seed = 0;
  /// Optional overrides; defaults are kind-specific (see make_sequence).
  std::optional<Vec> direction;  // c0 for fixed/alternating linear
  std::optional<Vec> quad_a;
  std::optional<double> quad_b;
};

/// A materialized loss sequence f_1..f_T. `id` names the sequence
/// (kind, seed, horizon, bound, domain) so traces and comparators can be
/// checked for identity before regret is formed.
struct LossSequence {
  std::vector<LossOracle> oracles;
  LossSequenceSpec spec;
  std::string id;

  int horizon() const { return static_cast<int>(oracles.size()); }
  const LossOracle& at(int t) const { return oracles.at(static_cast<size_t>(t - 1)); }  // t = 1..T
};

/// Generators:
///   random-linear      c_t uniform on the sphere of radius G_F
///   fixed-linear       c_t = c0 every round (defaults to a G_F-normalized
///                      spread direction)
///   alternating-linear c_t = (-1)^t c0, c0 = G_F e_1 by default
///   fixed-quadratic    same (a, b) every round, rescaled to meet G_F over
///                      the domain (1000 samples)
LossSequence make_sequence(const LossSequenceSpec& spec, const Domain& domain);

/// Max over coordinates of |analytic - central difference| / (1 + |analytic|).
double grad_check(const LossOracle& oracle, const Vec& x, double h);

}  // namespace omdlab
