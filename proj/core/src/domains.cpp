#include "omdlab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace omdlab {

namespace {

constexpr double kResidualTol = 1e-12;
constexpr int kMaxBisect = 200;

double norm_p(const Vec& x, double p) {
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

Domain Domain::smoothed_simplex(int d, double eps_min) {
  if (d < 1) throw config_error("smoothed_simplex: dimension must be >= 1");
  if (eps_min < 0.0 || d * eps_min >= 1.0)
    throw config_error("smoothed_simplex: need 0 <= d*eps_min < 1 for a nonempty domain");
  Domain dom;
  dom.kind_ = DomainKind::SmoothedSimplex;
  dom.d_ = d;
  dom.eps_min_ = eps_min;
  return dom;
}

Domain Domain::box(int d, double lo, double hi) {
  if (d < 1) throw config_error("box: dimension must be >= 1");
  if (!(lo < hi)) throw config_error("box: need lo < hi");
  Domain dom;
  dom.kind_ = DomainKind::Box;
  dom.d_ = d;
  dom.lo_ = lo;
  dom.hi_ = hi;
  return dom;
}

Domain Domain::positive_ball(int d, double p, double radius, double floor) {
  if (d < 1) throw config_error("positive_ball: dimension must be >= 1");
  if (p < 1.0) throw config_error("positive_ball: need p >= 1");
  if (!(radius > 0.0)) throw config_error("positive_ball: need radius > 0");
  if (floor < 0.0 || floor * std::pow(static_cast<double>(d), 1.0 / p) >= radius)
    throw config_error("positive_ball: floor leaves an empty domain");
  Domain dom;
  dom.kind_ = DomainKind::PositiveBall;
  dom.d_ = d;
  dom.p_ = p;
  dom.radius_ = radius;
  dom.floor_ = floor;
  return dom;
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DomainKind::SmoothedSimplex:
      os << "simplex(d=" << d_ << ",eps=" << eps_min_ << ")";
      break;
    case DomainKind::Box:
      os << "box(d=" << d_ << ",[" << lo_ << "," << hi_ << "])";
      break;
    case DomainKind::PositiveBall:
      os << "ball(d=" << d_ << ",p=" << p_ << ",r=" << radius_ << ",floor=" << floor_ << ")";
      break;
  }
  return os.str();
}

bool membership(const Domain& domain, const Vec& x, double tol) {
  if (x.size() != domain.dim()) throw invalid_input("membership: dimension mismatch");
  switch (domain.kind()) {
    case DomainKind::SmoothedSimplex: {
      if ((x.array() < domain.eps_min() - tol).any()) return false;
      return x.sum() <= 1.0 + tol;
    }
    case DomainKind::Box:
      return (x.array() >= domain.lo() - tol).all() && (x.array() <= domain.hi() + tol).all();
    case DomainKind::PositiveBall: {
      if ((x.array() < domain.floor() - tol).any()) return false;
      return norm_p(x, domain.p()) <= domain.radius() + tol;
    }
  }
  return false;
}

namespace {

// Root of grad1(s) + lambda*p*s^(p-1) = rhs on (0, hi]; the left side is
// strictly increasing in s, so a safeguarded Newton with a maintained
// bracket converges unconditionally.
double coordinate_solve(const Regularizer& reg, double p, double lambda, double rhs, double hi) {
  if (p == 1.0) {
    // Linear coupling term: the inverse link solves it outright.
    const double arg = rhs - lambda;
    if (reg.kind() == RegKind::Tempered && !(1.0 + (1.0 - reg.tau()) * arg > 0.0)) return 0.0;
    if (reg.kind() == RegKind::Euclidean) return arg;
    return reg.link_inverse1(arg);
  }
  if (reg.kind() == RegKind::Euclidean && p == 2.0) return rhs / (1.0 + 2.0 * lambda);

  auto phi = [&](double s) { return reg.grad1(s) + lambda * p * std::pow(s, p - 1.0) - rhs; };
  double b = hi;
  if (phi(b) < 0.0) return b;  // root beyond hi: the unclamped minimizer wins
  double a = std::min(1e-18, 1e-12 * hi);
  double s = 0.5 * (a + b);
  for (int it = 0; it < 80; ++it) {
    const double f = phi(s);
    if (f > 0.0) b = s; else a = s;
    if (std::abs(f) < 1e-14 * (1.0 + std::abs(rhs)) || b - a < 1e-16 * std::max(1.0, b)) break;
    const double fp = reg.hess1(s) + lambda * p * (p - 1.0) * std::pow(s, p - 2.0);
    double snext = s - f / fp;
    if (!(snext > a && snext < b)) snext = 0.5 * (a + b);
    s = snext;
  }
  return s;
}

struct CouplingSolve {
  Vec point;
  double lambda = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// Shared KKT reduction for an active sum/norm coupling constraint:
// bisect the multiplier, recover coordinates through the inverse link,
// clamp at per-coordinate lower bounds.
CouplingSolve solve_coupled(const Regularizer& reg, const Vec& y, double floor, double p,
                            double target, const char* what) {
  const int d = static_cast<int>(y.size());
  auto eval = [&](double lambda) {
    Vec x(d);
    for (int i = 0; i < d; ++i) {
      double s;
      if (reg.kind() == RegKind::Euclidean && y[i] <= floor) {
        s = floor;  // unclamped root sits below the bound for any multiplier
      } else {
        const double yi = std::max(y[i], 1e-300);
        s = coordinate_solve(reg, p, lambda, reg.grad1(yi), yi);
      }
      x[i] = std::max(s, floor);
    }
    return x;
  };
  auto measure = [&](const Vec& x) { return p == 1.0 ? x.sum() : norm_p(x, p); };

  CouplingSolve out;
  double lo = 0.0;
  double hi = 1.0;
  Vec x = eval(hi);
  int doublings = 0;
  while (measure(x) > target && doublings < 200) {
    lo = hi;
    hi *= 2.0;
    x = eval(hi);
    ++doublings;
  }
  if (doublings >= 200) {
    std::ostringstream os;
    os << what << ": bisection bracket failure, constraint value " << measure(x)
       << " above target " << target << " at multiplier " << hi;
    throw numerical_error(os.str());
  }
  double lambda = hi;
  for (int it = 0; it < kMaxBisect; ++it) {
    ++out.iterations;
    lambda = 0.5 * (lo + hi);
    x = eval(lambda);
    const double m = measure(x);
    if (std::abs(m - target) <= kResidualTol) break;
    if (m > target) lo = lambda; else hi = lambda;
    if (hi - lo < 1e-16 * std::max(1.0, hi)) break;
  }
  out.point = std::move(x);
  out.lambda = lambda;
  out.residual = std::abs(measure(out.point) - target);
  if (out.residual > 1e-8) {
    std::ostringstream os;
    os << what << ": constraint residual " << out.residual << " after " << out.iterations
       << " bisection iterations";
    throw numerical_error(os.str());
  }
  return out;
}

ProjectionResult project_impl(const Regularizer& reg, const Domain& domain, const Vec& y) {
  ProjectionResult res;
  switch (domain.kind()) {
    case DomainKind::Box: {
      res.point = y.cwiseMax(domain.lo()).cwiseMin(domain.hi());
      return res;
    }
    case DomainKind::SmoothedSimplex: {
      Vec x0 = y.cwiseMax(domain.eps_min());
      if (x0.sum() <= 1.0) {
        res.point = std::move(x0);
        return res;
      }
      CouplingSolve cs = solve_coupled(reg, y, domain.eps_min(), 1.0, 1.0, "simplex projection");
      res.point = std::move(cs.point);
      res.multiplier = cs.lambda;
      res.iterations = cs.iterations;
      res.residual = cs.residual;
      return res;
    }
    case DomainKind::PositiveBall: {
      Vec x0 = y.cwiseMax(domain.floor());
      if (norm_p(x0, domain.p()) <= domain.radius()) {
        res.point = std::move(x0);
        return res;
      }
      if (reg.kind() == RegKind::Euclidean && domain.p() == 2.0 && domain.floor() == 0.0) {
        // Clamp then rescale radially; exact on ball-intersect-orthant.
        Vec w = y.cwiseMax(0.0);
        const double n = w.norm();
        res.point = w * (domain.radius() / n);
        res.multiplier = 0.5 * (n / domain.radius() - 1.0);
        return res;
      }
      CouplingSolve cs =
          solve_coupled(reg, y, domain.floor(), domain.p(), domain.radius(), "ball projection");
      res.point = std::move(cs.point);
      res.multiplier = cs.lambda;
      res.iterations = cs.iterations;
      res.residual = cs.residual;
      return res;
    }
  }
  throw config_error("project: unknown domain kind");
}

}  // namespace

ProjectionResult euclid_project(const Domain& domain, const Vec& v) {
  require_finite(v, "euclid_project");
  if (v.size() != domain.dim()) throw invalid_input("euclid_project: dimension mismatch");
  return project_impl(Regularizer::euclidean(), domain, v);
}

ProjectionResult bregman_project(const Regularizer& reg, const Domain& domain, const Vec& y) {
  require_finite(y, "bregman_project");
  if (y.size() != domain.dim()) throw invalid_input("bregman_project: dimension mismatch");
  if (reg.requires_positive() && (y.array() <= 0.0).any())
    throw invalid_input("bregman_project: y must be strictly positive for " + reg.name());
  return project_impl(reg, domain, y);
}

Domain map_domain(const Reparameterization& q, const Domain& primal) {
  switch (q.kind()) {
    case MapKind::Identity:
      return primal;
    case MapKind::QuarterSquare: {
      if (primal.kind() == DomainKind::SmoothedSimplex) {
        return Domain::positive_ball(primal.dim(), 2.0, 2.0, 2.0 * std::sqrt(primal.eps_min()));
      }
      if (primal.kind() == DomainKind::PositiveBall) {
        return Domain::positive_ball(primal.dim(), 2.0 * primal.p(),
                                     2.0 * std::sqrt(primal.radius()),
                                     2.0 * std::sqrt(primal.floor()));
      }
      break;
    }
    case MapKind::Exponential: {
      if (primal.kind() == DomainKind::Box && primal.lo() > 0.0) {
        return Domain::box(primal.dim(), std::log(primal.lo()), std::log(primal.hi()));
      }
      break;
    }
    case MapKind::Power: {
      if (primal.kind() == DomainKind::PositiveBall) {
        const double a = q.exponent();
        if (primal.p() <= 1.0 - q.tau() / 2.0)
          throw config_error("map_domain: power map with p <= 1 - tau/2 has a non-convex image");
        return Domain::positive_ball(primal.dim(), a * primal.p(),
                                     a * std::pow(primal.radius(), 1.0 / a),
                                     a * std::pow(primal.floor(), 1.0 / a));
      }
      break;
    }
  }
  throw config_error("map_domain: unsupported (" + q.name() + ", " + primal.describe() +
                     ") combination");
}

Vec domain_center(const Domain& domain) {
  const int d = domain.dim();
  switch (domain.kind()) {
    case DomainKind::SmoothedSimplex:
      return Vec::Constant(d, std::max(1.0 / (2.0 * d), domain.eps_min()));
    case DomainKind::Box:
      return Vec::Constant(d, 0.5 * (domain.lo() + domain.hi()));
    case DomainKind::PositiveBall: {
      const double c = 0.5 * domain.radius() * std::pow(static_cast<double>(d), -1.0 / domain.p());
      return Vec::Constant(d, std::max(c, domain.floor()));
    }
  }
  throw config_error("domain_center: unknown domain kind");
}

double linear_max_bound(const Domain& domain, const Vec& a) {
  if (a.size() != domain.dim()) throw invalid_input("linear_max_bound: dimension mismatch");
  switch (domain.kind()) {
    case DomainKind::SmoothedSimplex: {
      // Floor everywhere, the remaining budget on the best coordinate.
      const double slack = 1.0 - domain.dim() * domain.eps_min();
      return domain.eps_min() * a.sum() + slack * std::max(0.0, a.maxCoeff());
    }
    case DomainKind::Box: {
      double s = 0.0;
      for (int i = 0; i < a.size(); ++i) s += a[i] > 0.0 ? a[i] * domain.hi() : a[i] * domain.lo();
      return s;
    }
    case DomainKind::PositiveBall: {
      const double p = domain.p();
      double dual = 0.0;
      if (p == 1.0) {
        dual = std::max(0.0, a.maxCoeff());
      } else {
        const double q = p / (p - 1.0);
        for (int i = 0; i < a.size(); ++i) dual += std::pow(std::max(a[i], 0.0), q);
        dual = std::pow(dual, 1.0 / q);
      }
      return domain.floor() * a.sum() + domain.radius() * dual;
    }
  }
  throw config_error("linear_max_bound: unknown domain kind");
}

double euclid_diameter(const Domain& domain) {
  const int d = domain.dim();
  switch (domain.kind()) {
    case DomainKind::SmoothedSimplex: {
      const double span = 1.0 - d * domain.eps_min();
      return d >= 2 ? std::sqrt(2.0) * span : span;
    }
    case DomainKind::Box:
      return std::sqrt(static_cast<double>(d)) * (domain.hi() - domain.lo());
    case DomainKind::PositiveBall:
      return d >= 2 ? std::sqrt(2.0) * domain.radius() : domain.radius() - domain.floor();
  }
  return 0.0;
}

Vec sample_interior(const Domain& domain, Rng& rng, double margin) {
  const int d = domain.dim();
  switch (domain.kind()) {
    case DomainKind::Box: {
      const double pad = margin * (domain.hi() - domain.lo());
      return rng.uniform_vec(d, domain.lo() + pad, domain.hi() - pad);
    }
    case DomainKind::SmoothedSimplex: {
      // Floors rise by margin*slack/d (the per-coordinate scale) and the sum
      // budget drops by margin*slack, so any margin < 1/2 works in any d.
      const double slack = 1.0 - d * domain.eps_min();
      const double scale = slack * (1.0 - 2.0 * margin);
      if (scale <= 0.0)
        throw config_error("sample_interior: margin leaves an empty simplex interior");
      // Dirichlet(1,...,1) with one slack coordinate gives the uniform law
      // on the filled simplex.
      Vec g(d + 1);
      for (int i = 0; i <= d; ++i) g[i] = -std::log(rng.next_positive_double());
      const Vec z = g.head(d) / g.sum();
      return Vec::Constant(d, domain.eps_min() + margin * slack / d) + scale * z;
    }
    case DomainKind::PositiveBall: {
      const double r = (1.0 - margin) * domain.radius();
      const double lo =
          domain.floor() + margin * domain.radius() * std::pow(static_cast<double>(d), -1.0 / domain.p());
      if (lo * std::pow(static_cast<double>(d), 1.0 / domain.p()) >= r)
        throw config_error("sample_interior: margin leaves an empty ball interior");
      for (int attempt = 0; attempt < 200000; ++attempt) {
        const Vec x = rng.uniform_vec(d, lo, r);
        if (norm_p(x, domain.p()) <= r) return x;
      }
      throw config_error("sample_interior: rejection sampler failed on " + domain.describe());
    }
  }
  throw config_error("sample_interior: unknown domain kind");
}

}  // namespace omdlab
