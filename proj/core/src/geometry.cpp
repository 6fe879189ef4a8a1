#include "omdlab/geometry.hpp"

#include <cmath>
#include <sstream>

namespace omdlab {

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    std::ostringstream os;
    os << what << ": vector has a NaN or infinite entry";
    throw invalid_input(os.str());
  }
}

namespace {

void require_positive(const Vec& x, const char* what) {
  for (int i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      std::ostringstream os;
      os << what << ": nonpositive entry " << x[i] << " at coordinate " << i
         << " for a log-based regularizer";
      throw invalid_input(os.str());
    }
  }
}

}  // namespace

Regularizer Regularizer::tempered(double tau) {
  if (tau < 0.0 || tau >= 1.0) throw config_error("tempered regularizer needs tau in [0,1)");
  return Regularizer(RegKind::Tempered, tau);
}

std::string Regularizer::name() const {
  switch (kind_) {
    case RegKind::NegEntropy: return "neg-entropy";
    case RegKind::LogBarrier: return "log-barrier";
    case RegKind::Tempered: return "tempered";
    case RegKind::Euclidean: return "euclidean";
  }
  return "?";
}

double Regularizer::value1(double x) const {
  switch (kind_) {
    case RegKind::NegEntropy: return x * std::log(x);
    case RegKind::LogBarrier: return -std::log(x);
    case RegKind::Tempered: {
      // Antiderivative of the tempered link (x^(1-tau)-1)/(1-tau).
      const double om = 1.0 - tau_;
      return std::pow(x, 2.0 - tau_) / (om * (2.0 - tau_)) - x / om;
    }
    case RegKind::Euclidean: return 0.5 * x * x;
  }
  return 0.0;
}

double Regularizer::grad1(double x) const {
  switch (kind_) {
    case RegKind::NegEntropy: return 1.0 + std::log(x);
    case RegKind::LogBarrier: return -1.0 / x;
    case RegKind::Tempered: return (std::pow(x, 1.0 - tau_) - 1.0) / (1.0 - tau_);
    case RegKind::Euclidean: return x;
  }
  return 0.0;
}

double Regularizer::hess1(double x) const {
  switch (kind_) {
    case RegKind::NegEntropy: return 1.0 / x;
    case RegKind::LogBarrier: return 1.0 / (x * x);
    case RegKind::Tempered: return std::pow(x, -tau_);
    case RegKind::Euclidean: return 1.0;
  }
  return 0.0;
}

double Regularizer::third1(double x) const {
  switch (kind_) {
    case RegKind::NegEntropy: return -1.0 / (x * x);
    case RegKind::LogBarrier: return -2.0 / (x * x * x);
    case RegKind::Tempered: return -tau_ * std::pow(x, -tau_ - 1.0);
    case RegKind::Euclidean: return 0.0;
  }
  return 0.0;
}

double Regularizer::link_inverse1(double g) const {
  switch (kind_) {
    case RegKind::NegEntropy: return std::exp(g - 1.0);
    case RegKind::LogBarrier:
      if (!(g < 0.0)) {
        std::ostringstream os;
        os << "log-barrier inverse link needs a negative dual value, got " << g;
        throw numerical_error(os.str());
      }
      return -1.0 / g;
    case RegKind::Tempered: {
      const double om = 1.0 - tau_;
      const double s = 1.0 + om * g;
      if (!(s > 0.0)) {
        std::ostringstream os;
        os << "tempered inverse link argument " << s << " outside (0,inf); dual value " << g;
        throw numerical_error(os.str());
      }
      return std::pow(s, 1.0 / om);
    }
    case RegKind::Euclidean: return g;
  }
  return 0.0;
}

double Regularizer::value(const Vec& x) const {
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += value1(x[i]);
  return s;
}

Vec Regularizer::grad(const Vec& x) const {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) g[i] = grad1(x[i]);
  return g;
}

Vec Regularizer::hessian_diag(const Vec& x) const {
  Vec h(x.size());
  for (int i = 0; i < x.size(); ++i) h[i] = hess1(x[i]);
  return h;
}

Vec Regularizer::link_inverse(const Vec& g) const {
  Vec x(g.size());
  for (int i = 0; i < g.size(); ++i) x[i] = link_inverse1(g[i]);
  return x;
}

double bregman_divergence(const Regularizer& reg, const Vec& x, const Vec& y) {
  require_finite(x, "bregman_divergence x");
  require_finite(y, "bregman_divergence y");
  if (x.size() != y.size()) throw invalid_input("bregman_divergence: dimension mismatch");
  if (reg.requires_positive()) {
    require_positive(x, "bregman_divergence x");
    require_positive(y, "bregman_divergence y");
  }
  double d = reg.value(x) - reg.value(y) - reg.grad(y).dot(x - y);
  return d < 0.0 ? 0.0 : d;
}

Vec link_apply(const Regularizer& reg, const Vec& x) {
  require_finite(x, "link_apply");
  if (reg.requires_positive()) require_positive(x, "link_apply");
  return reg.grad(x);
}

Vec link_invert(const Regularizer& reg, const Vec& g) {
  require_finite(g, "link_invert");
  return reg.link_inverse(g);
}

Reparameterization Reparameterization::power(double tau) {
  if (tau < 0.0 || tau > 1.0) throw config_error("power map needs tau in [0,1]");
  return Reparameterization(MapKind::Power, tau);
}

double Reparameterization::exponent() const {
  switch (kind_) {
    case MapKind::QuarterSquare: return 2.0;
    case MapKind::Power: return 2.0 / (2.0 - tau_);
    default: return 1.0;
  }
}

std::string Reparameterization::name() const {
  switch (kind_) {
    case MapKind::QuarterSquare: return "quarter-square";
    case MapKind::Exponential: return "exponential";
    case MapKind::Power: return "power";
    case MapKind::Identity: return "identity";
  }
  return "?";
}

double Reparameterization::forward1(double u) const {
  switch (kind_) {
    case MapKind::QuarterSquare: return 0.25 * u * u;
    case MapKind::Exponential: return std::exp(u);
    case MapKind::Power: {
      const double a = exponent();
      return std::pow(u / a, a);
    }
    case MapKind::Identity: return u;
  }
  return 0.0;
}

double Reparameterization::inverse1(double x) const {
  switch (kind_) {
    case MapKind::QuarterSquare:
      if (x < 0.0) throw invalid_input("quarter-square inverse: negative entry");
      return 2.0 * std::sqrt(x);
    case MapKind::Exponential:
      if (!(x > 0.0)) throw invalid_input("exponential inverse: nonpositive entry");
      return std::log(x);
    case MapKind::Power: {
      if (x < 0.0) throw invalid_input("power inverse: negative entry");
      const double a = exponent();
      return a * std::pow(x, 1.0 / a);
    }
    case MapKind::Identity: return x;
  }
  return 0.0;
}

double Reparameterization::jacobian1(double u) const {
  switch (kind_) {
    case MapKind::QuarterSquare: return 0.5 * u;
    case MapKind::Exponential: return std::exp(u);
    case MapKind::Power: {
      const double a = exponent();
      return std::pow(u / a, a - 1.0);
    }
    case MapKind::Identity: return 1.0;
  }
  return 0.0;
}

double Reparameterization::jacobian_prime1(double u) const {
  switch (kind_) {
    case MapKind::QuarterSquare: return 0.5;
    case MapKind::Exponential: return std::exp(u);
    case MapKind::Power: {
      const double a = exponent();
      return ((a - 1.0) / a) * std::pow(u / a, a - 2.0);
    }
    case MapKind::Identity: return 0.0;
  }
  return 0.0;
}

Vec Reparameterization::forward(const Vec& u) const {
  Vec x(u.size());
  for (int i = 0; i < u.size(); ++i) x[i] = forward1(u[i]);
  return x;
}

Vec Reparameterization::inverse(const Vec& x) const {
  Vec u(x.size());
  for (int i = 0; i < x.size(); ++i) u[i] = inverse1(x[i]);
  return u;
}

Vec Reparameterization::jacobian_diag(const Vec& u) const {
  Vec j(u.size());
  for (int i = 0; i < u.size(); ++i) j[i] = jacobian1(u[i]);
  return j;
}

Vec reparam_forward(const Reparameterization& q, const Vec& u) {
  require_finite(u, "reparam_forward");
  return q.forward(u);
}

Vec reparam_inverse(const Reparameterization& q, const Vec& x) {
  require_finite(x, "reparam_inverse");
  return q.inverse(x);
}

Vec chain_gradient(const Reparameterization& q, const Vec& u, const Vec& grad_f_at_x) {
  require_finite(u, "chain_gradient u");
  require_finite(grad_f_at_x, "chain_gradient grad");
  if (u.size() != grad_f_at_x.size()) throw invalid_input("chain_gradient: dimension mismatch");
  return q.jacobian_diag(u).cwiseProduct(grad_f_at_x);
}

}  // namespace omdlab
