#include "omdlab/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace omdlab {

ScalarMap scalar_map(const Reparameterization& q, double lower, double upper, double c) {
  if (!(lower < upper)) throw config_error("scalar_map: need lower < upper");
  ScalarMap m;
  m.q = [q](double u) { return q.forward1(u); };
  m.dq = [q](double u) { return q.jacobian1(u); };
  m.d2q = [q](double u) { return q.jacobian_prime1(u); };
  m.q_inv = [q](double x) { return q.inverse1(x); };
  m.lower = lower;
  m.upper = upper;
  m.c = c;
  m.name = q.name();
  return m;
}

DiffeoReport check_diffeomorphism(const ScalarMap& map, int samples) {
  if (samples < 2) throw invalid_input("check_diffeomorphism: need samples >= 2");
  DiffeoReport report;
  report.min_abs_slope = std::numeric_limits<double>::infinity();
  int sign = 0;
  bool flipped = false;
  for (int i = 0; i < samples; ++i) {
    const double u = map.lower + (map.upper - map.lower) * i / (samples - 1);
    const double s = map.dq(u);
    report.min_abs_slope = std::min(report.min_abs_slope, std::abs(s));
    const int si = s > 0.0 ? 1 : (s < 0.0 ? -1 : 0);
    if (si == 0 || (sign != 0 && si != sign)) {
      flipped = true;
    } else {
      sign = si;
    }
  }
  report.sign = flipped ? 0 : sign;
  report.pass = !flipped && report.min_abs_slope >= 1e-8;
  return report;
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw numerical_error("adaptive quadrature did not converge");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Fritsch-Carlson shape-preserving knot slopes.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      d[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

size_t locate(const std::vector<double>& grid, double u) {
  if (u < grid.front() - 1e-12 || u > grid.back() + 1e-12)
    throw invalid_input("reconstructed link queried outside its grid");
  const auto it = std::upper_bound(grid.begin(), grid.end(), u);
  size_t k = static_cast<size_t>(std::distance(grid.begin(), it));
  if (k > 0) --k;
  if (k + 1 >= grid.size()) k = grid.size() - 2;
  return k;
}

}  // namespace

double ReconstructedLink::evaluate(double u) const {
  const size_t k = locate(grid, u);
  const double h = grid[k + 1] - grid[k];
  const double del = (values[k + 1] - values[k]) / h;
  const double xi = u - grid[k];
  const double c2 = (3.0 * del - 2.0 * slopes[k] - slopes[k + 1]) / h;
  const double c3 = (slopes[k] + slopes[k + 1] - 2.0 * del) / (h * h);
  return values[k] + xi * (slopes[k] + xi * (c2 + xi * c3));
}

double ReconstructedLink::derivative(double u) const {
  const size_t n = grid.size();
  const size_t width = std::min<size_t>(7, n);
  size_t k = locate(grid, u);
  size_t lo = k >= width / 2 ? k - width / 2 : 0;
  if (lo + width > n) lo = n - width;
  // Newton divided differences over the window, then evaluate p'.
  std::vector<double> coef(values.begin() + lo, values.begin() + lo + width);
  for (size_t j = 1; j < width; ++j) {
    for (size_t i = width - 1; i >= j; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / (grid[lo + i] - grid[lo + i - j]);
      if (i == j) break;
    }
  }
  double p = coef[width - 1], dp = 0.0;
  for (size_t i = width - 1; i-- > 0;) {
    const double dx = u - grid[lo + i];
    dp = dp * dx + p;
    p = p * dx + coef[i];
  }
  return dp;
}

void ReconstructedLink::refit() { slopes = pchip_slopes(grid, values); }

ReconstructedLink reconstruct_link(const ScalarMap& map, double h_max) {
  if (!(h_max > 0.0)) throw config_error("reconstruct_link: need h_max > 0");
  const DiffeoReport diffeo = check_diffeomorphism(map, 257);
  if (!diffeo.pass)
    throw config_error("reconstruct_link: " + map.name +
                       " is not a diffeomorphism on the interval");

  // Graded grid: finer where |q'| is small, so the steep part of 1/q' near
  // the lower endpoint is resolved by the table, not just the quadrature.
  double max_slope = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double u = map.lower + (map.upper - map.lower) * i / 256.0;
    max_slope = std::max(max_slope, std::abs(map.dq(u)));
  }
  std::vector<double> grid;
  grid.push_back(map.lower);
  while (grid.back() < map.upper) {
    const double scale = std::clamp(std::abs(map.dq(grid.back())) / max_slope, 0.05, 1.0);
    double next = grid.back() + h_max * scale;
    if (next > map.upper - 0.25 * h_max) next = map.upper;
    grid.push_back(next);
  }

  const double total = map.upper - map.lower;
  const auto integrand = [&map](double v) { return 1.0 / map.dq(v); };
  ReconstructedLink link;
  link.grid = grid;
  link.values.resize(grid.size());
  double integral = 0.0;
  link.values[0] = map.dq(grid[0]) * (integral + map.c);
  for (size_t k = 1; k < grid.size(); ++k) {
    const double tol = 1e-9 * std::max((grid[k] - grid[k - 1]) / total, 1e-6);
    integral += adaptive_simpson(integrand, grid[k - 1], grid[k], tol);
    link.values[k] = map.dq(grid[k]) * (integral + map.c);
  }
  link.refit();
  return link;
}

double ode_residual(const ScalarMap& map, const ReconstructedLink& link, double u) {
  const double r1 = link.evaluate(u);
  const double r2 = link.derivative(u);
  return std::abs(map.dq(u) * r2 - map.d2q(u) * r1 - map.dq(u));
}

double reconstructed_hessian(const ScalarMap& map, double x) {
  double a = map.q(map.lower), b = map.q(map.upper);
  if (a > b) std::swap(a, b);
  if (x < a - 1e-12 || x > b + 1e-12) {
    std::ostringstream os;
    os << "reconstructed_hessian: x = " << x << " outside the image interval [" << a << ", " << b
       << "]";
    throw invalid_input(os.str());
  }
  double u;
  if (map.q_inv) {
    u = map.q_inv(x);
  } else {
    double lo = map.lower, hi = map.upper;
    const bool increasing = map.q(map.lower) < map.q(map.upper);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((map.q(mid) < x) == increasing) lo = mid; else hi = mid;
    }
    u = 0.5 * (lo + hi);
  }
  const double slope = map.dq(u);
  return 1.0 / (slope * slope);
}

ReconstructionReport certify_reconstruction(const ScalarMap& map, const Regularizer* known,
                                            double h_max) {
  const ReconstructedLink link = reconstruct_link(map, h_max);
  ReconstructionReport report;
  report.grid_points = static_cast<int>(link.grid.size());
  for (size_t k = 1; k + 1 < link.grid.size(); ++k) {
    report.max_ode_residual = std::max(report.max_ode_residual, ode_residual(map, link, link.grid[k]));
  }

  double xa = map.q(map.lower), xb = map.q(map.upper);
  if (xa > xb) std::swap(xa, xb);
  report.strong_convexity_floor = std::numeric_limits<double>::infinity();
  const int n = 200;
  for (int i = 0; i <= n; ++i) {
    const double x = xa + (xb - xa) * i / n;
    const double hess = reconstructed_hessian(map, x);
    report.strong_convexity_floor = std::min(report.strong_convexity_floor, hess);
    if (known != nullptr) {
      const double ref = known->hess1(std::max(x, 1e-300));
      const double rel = std::abs(hess - ref) / std::max(std::abs(ref), 1e-300);
      report.max_hessian_mismatch = std::max(report.max_hessian_mismatch, rel);
    }
  }
  return report;
}

}  // namespace omdlab
