#pragma once

#include <Eigen/Core>
#include <string>

#include "omdlab/geometry.hpp"
#include "omdlab/rng.hpp"

namespace omdlab {

enum class DomainKind { SmoothedSimplex, Box, PositiveBall };

/// Constraint-set descriptor. Three kinds cover every built-in pairing:
///   smoothed filled simplex  { x_i >= eps_min, sum x <= 1 }
///   box                      [lo, hi]^d
///   positive lp ball         { x_i >= floor, ||x||_p <= radius }
class Domain {
 public:
  static Domain smoothed_simplex(int d, double eps_min);
  static Domain box(int d, double lo, double hi);
  static Domain positive_ball(int d, double p, double radius, double floor = 0.0);
  static Domain positive_l2_ball(int d, double radius) { return positive_ball(d, 2.0, radius); }

  DomainKind kind() const { return kind_; }
  int dim() const { return d_; }
  double eps_min() const { return eps_min_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double p() const { return p_; }
  double radius() const { return radius_; }
  double floor() const { return floor_; }
  std::string describe() const;

 private:
  Domain() = default;

  DomainKind kind_ = DomainKind::Box;
  int d_ = 0;
  double eps_min_ = 0.0;              // simplex
  double lo_ = 0.0, hi_ = 1.0;        // box
  double p_ = 2.0, radius_ = 1.0, floor_ = 0.0;  // ball
};

bool membership(const Domain& domain, const Vec& x, double tol = 1e-9);

struct ProjectionResult {
  Vec point;
  double multiplier = 0.0;  // KKT multiplier of the active coupling constraint
  int iterations = 0;
  double residual = 0.0;
};

/// argmin_{x in domain} ||x - v||_2. Closed forms where available
/// (componentwise clamp for boxes; clamp-then-rescale for the l2 ball over
/// the orthant), KKT bisection on the coupling multiplier otherwise.
ProjectionResult euclid_project(const Domain& domain, const Vec& v);

/// argmin_{x in domain} D_R(x || y) for a separable regularizer. Solved by
/// bisection on the scalar multiplier of the active sum/norm constraint with
/// coordinates recovered through the inverse link and clamped at their lower
/// bounds. With the euclidean regularizer this coincides with euclid_project.
ProjectionResult bregman_project(const Regularizer& reg, const Domain& domain, const Vec& y);

/// Exact image q^{-1}(primal) for the supported combinations:
///   quarter-square : simplex {x>=e, sum<=1} -> {u >= 2 sqrt(e), ||u||_2 <= 2},
///                    and positive balls as the tau=1 power map
///   exponential    : box [lo,hi]^d (lo>0)   -> box [log lo, log hi]^d
///   power(tau)     : ball B_p^+(r)          -> B_{ap}^+(a r^{1/a}), a = 2/(2-tau);
///                    needs p > 1 - tau/2 or the image is non-convex
///   identity       : any domain unchanged
Domain map_domain(const Reparameterization& q, const Domain& primal);

Vec domain_center(const Domain& domain);

/// Maximum of a . x over the domain: exact for boxes and simplices, a tight
/// Hoelder upper bound for balls with a positive floor.
double linear_max_bound(const Domain& domain, const Vec& a);

/// Euclidean diameter (exact for boxes, tight constant for the others);
/// used for plot scales and certificate slack accounting.
double euclid_diameter(const Domain& domain);

/// Uniform sample from the domain shrunk by `margin` on every constraint.
/// Exact for boxes and simplices; rejection sampling for balls, failing with
/// config_error if the shrunk set is degenerate.
Vec sample_interior(const Domain& domain, Rng& rng, double margin = 0.05);

}  // namespace omdlab
