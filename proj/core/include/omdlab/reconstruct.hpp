#pragma once

#include <functional>
#include <string>
#include <vector>

#include "omdlab/geometry.hpp"

namespace omdlab {

/// One coordinate of a diagonal reparameterization on an interval
/// [lower, upper], with first and second derivatives and (optionally) a
/// closed-form inverse. `c` is the free integration constant of the
/// reconstructed link.
struct ScalarMap {
  std::function<double(double)> q;
  std::function<double(double)> dq;
  std::function<double(double)> d2q;
  std::function<double(double)> q_inv;  // may be empty: bisection fallback
  double lower = 0.0;
  double upper = 1.0;
  double c = 0.0;
  std::string name;
};

/// Wraps one coordinate of a built-in reparameterization.
ScalarMap scalar_map(const Reparameterization& q, double lower, double upper, double c = 0.0);

struct DiffeoReport {
  double min_abs_slope = 0.0;
  int sign = 0;  // +1 / -1; 0 when a sign change was detected
  bool pass = false;
};

/// Evaluates q' on a uniform grid; passes iff the slope never changes sign
/// and stays at least 1e-8 in magnitude.
DiffeoReport check_diffeomorphism(const ScalarMap& map, int samples);

/// Tabulated reconstructed link value R~'(u) on a grid covering
/// [lower, upper], evaluated between knots by a monotone (Fritsch-Carlson)
/// cubic.
struct ReconstructedLink {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> slopes;  // cubic knot slopes

  double evaluate(double u) const;
  /// d/du of the tabulated link (so the regularizer's second derivative in
  /// the reparameterized variable), from a 7-point local polynomial through
  /// the tabulated values; the basis of the ODE residual check.
  double derivative(double u) const;
  /// Rebuilds the interpolant slopes after the values are edited
  /// (negative-control experiments corrupt the table and recheck).
  void refit();
};

/// Variation of constants: R~'(u) = q'(u) * Int_C^u dv/q'(v) + c q'(u),
/// tabulated with adaptive Simpson quadrature (absolute tolerance 1e-9
/// across the interval) on a grid with spacing at most h_max, graded finer
/// where |q'| is small.
ReconstructedLink reconstruct_link(const ScalarMap& map, double h_max);

/// |q' R~'' - q'' R~' - q'| at u, with R~'' taken from the tabulated link.
double ode_residual(const ScalarMap& map, const ReconstructedLink& link, double u);

/// The Hessian the reconstructed regularizer must carry:
/// 1 / q'(q^{-1}(x))^2. Rejects x outside q([lower, upper]).
double reconstructed_hessian(const ScalarMap& map, double x);

struct ReconstructionReport {
  double max_ode_residual = 0.0;
  /// Max relative gap against the known regularizer's Hessian; -1 when no
  /// reference was supplied.
  double max_hessian_mismatch = -1.0;
  double strong_convexity_floor = 0.0;
  int grid_points = 0;
};

/// Full certification: reconstructs the link, sweeps the ODE residual over
/// the interior grid, compares the implied Hessian against `known` (when
/// given) on 200 points of the image interval, and reports the minimum
/// Hessian value as the strong-convexity floor.
ReconstructionReport certify_reconstruction(const ScalarMap& map, const Regularizer* known,
                                            double h_max);

}  // namespace omdlab
