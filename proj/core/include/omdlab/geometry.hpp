#pragma once

#include <Eigen/Core>
#include <string>

#include "omdlab/errors.hpp"

namespace omdlab {

using Vec = Eigen::VectorXd;

/// Throws invalid_input if any entry is NaN or infinite.
void require_finite(const Vec& v, const char* what);

enum class RegKind { NegEntropy, LogBarrier, Tempered, Euclidean };

/// Coordinate-separable regularizer R(x) = sum_i r(x_i) together with its
/// link (gradient), inverse link, and diagonal second/third derivatives.
///
/// Built-ins and their links:
///   neg-entropy   r(x) = x log x          r'(x) = 1 + log x
///   log-barrier   r(x) = -log x           r'(x) = -1/x
///   tempered(tau) r'(x) = (x^(1-tau)-1)/(1-tau), tau in [0,1)
///   euclidean     r(x) = x^2/2            r'(x) = x
///
/// All built-ins have r''(x) >= 1 on coordinates x <= 1, which is where the
/// paired domains live, so 1-strong convexity holds without rescaling.
class Regularizer {
 public:
  static Regularizer neg_entropy() { return Regularizer(RegKind::NegEntropy, 0.0); }
  static Regularizer log_barrier() { return Regularizer(RegKind::LogBarrier, 0.0); }
  static Regularizer tempered(double tau);
  static Regularizer euclidean() { return Regularizer(RegKind::Euclidean, 0.0); }

  RegKind kind() const { return kind_; }
  double tau() const { return tau_; }
  std::string name() const;
  /// True for links defined only on positive coordinates.
  bool requires_positive() const { return kind_ != RegKind::Euclidean; }

  // Scalar surface; the vector forms map these coordinatewise.
  double value1(double x) const;
  double grad1(double x) const;
  double hess1(double x) const;
  double third1(double x) const;
  /// Inverse of grad1. Throws numerical_error when g is outside the link's
  /// range (e.g. a nonpositive argument for the log-barrier inverse).
  double link_inverse1(double g) const;

  double value(const Vec& x) const;
  Vec grad(const Vec& x) const;
  Vec hessian_diag(const Vec& x) const;
  Vec link_inverse(const Vec& g) const;

 private:
  Regularizer(RegKind kind, double tau) : kind_(kind), tau_(tau) {}

  RegKind kind_;
  double tau_;
};

/// D_R(x || y) = R(x) - R(y) - <grad R(y), x - y>. Requires x, y strictly
/// inside the admissible region (positive entries for log-based kinds).
/// The tiny negative values that floating evaluation can produce at x ~ y are
/// clamped to zero.
double bregman_divergence(const Regularizer& reg, const Vec& x, const Vec& y);

/// Dual-space link application/inversion, the two halves of a mirror step.
Vec link_apply(const Regularizer& reg, const Vec& x);
Vec link_invert(const Regularizer& reg, const Vec& g);

enum class MapKind { QuarterSquare, Exponential, Power, Identity };

/// Bijective coordinate-separable reparameterization q with diagonal
/// Jacobian. Built-ins:
///   quarter-square q(u) = u^2/4,  inverse 2*sqrt(x) (nonnegative root)
///   exponential    q(u) = exp(u)
///   power(tau)     q(u) = (u/a)^a with a = 2/(2-tau); the prefactor a^-a
///                  makes [r''(q(u))]^-1 = q'(u)^2 hold exactly against the
///                  tempered regularizer (tau=1 gives u^2/4, tau=0 identity)
///   identity
class Reparameterization {
 public:
  static Reparameterization quarter_square() { return Reparameterization(MapKind::QuarterSquare, 0.0); }
  static Reparameterization exponential() { return Reparameterization(MapKind::Exponential, 0.0); }
  static Reparameterization power(double tau);
  static Reparameterization identity() { return Reparameterization(MapKind::Identity, 0.0); }

  MapKind kind() const { return kind_; }
  double tau() const { return tau_; }
  /// Power-law exponent a = 2/(2-tau); 1 for identity, 2 for quarter-square.
  double exponent() const;
  std::string name() const;

  double forward1(double u) const;
  double inverse1(double x) const;
  double jacobian1(double u) const;
  /// d/du of jacobian1, used for smoothness constants and reconstruction.
  double jacobian_prime1(double u) const;

  Vec forward(const Vec& u) const;
  Vec inverse(const Vec& x) const;
  Vec jacobian_diag(const Vec& u) const;

 private:
  Reparameterization(MapKind kind, double tau) : kind_(kind), tau_(tau) {}

  MapKind kind_;
  double tau_;
};

Vec reparam_forward(const Reparameterization& q, const Vec& u);
Vec reparam_inverse(const Reparameterization& q, const Vec& x);

/// Pullback of a primal gradient: J_q(u)^T * grad_f_at_x (diagonal multiply).
/// Equals the gradient of u -> f(q(u)).
Vec chain_gradient(const Reparameterization& q, const Vec& u, const Vec& grad_f_at_x);

}  // namespace omdlab
