#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "omdlab/domains.hpp"
#include "omdlab/geometry.hpp"

namespace omdlab {

/// A regularizer R, reparameterization q, primal domain K and reparameterized
/// domain K' = q^{-1}(K), tied together by the Hessian/Jacobian identity
/// [grad^2 R(q(u))]^{-1} = J_q(u) J_q(u)^T. Built-in pairs satisfy it
/// exactly; verify_assumption1 measures it on fresh samples.
struct GeometryPair {
  Regularizer reg;
  Reparameterization map;
  Domain primal;
  Domain reparam;
  std::string name;
  /// Smoothness and Bregman-diameter bounds; populated by
  /// estimate_constants when a sweep needs them.
  std::optional<double> smoothness_bound;
  std::optional<double> diameter_bound;
};

/// Negative entropy + quarter-square on the smoothed filled simplex;
/// K' = { u >= 2 sqrt(eps_min), ||u||_2 <= 2 }.
GeometryPair make_eg_pair(int d, double eps_min = 1e-3);

/// Log barrier + elementwise exponential on the box [eps, 1]^d;
/// K' = [log eps, 0]^d.
GeometryPair make_log_barrier_pair(int d, double eps = std::exp(-2.0));

/// Tempered regularizer + normalized power map on the positive lp ball of
/// radius 1; K' = B^+_{ap}(a) with a = 2/(2-tau).
GeometryPair make_tempered_pair(int d, double tau, double p = 2.0);

/// Euclidean regularizer + identity map on the unit box; OMD and
/// reparameterized OGD coincide step for step on this pair.
GeometryPair make_euclidean_pair(int d);

struct Assumption1Report {
  double max_deviation = 0.0;
  Vec worst_point;
  bool pass = false;
  int samples = 0;
};

/// Samples the interior of K' (margin 0.05 per constraint) and reports the
/// largest entrywise gap between [grad^2 R(q(u))]^{-1} and J_q(u) J_q(u)^T.
Assumption1Report verify_assumption1(const GeometryPair& pair, int num_samples, double tol,
                                     std::uint64_t seed = 0);

}  // namespace omdlab
