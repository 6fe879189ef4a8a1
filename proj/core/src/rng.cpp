#include "omdlab/rng.hpp"

#include <cmath>

namespace omdlab {

double Rng::next_gaussian() {
  const double u1 = next_positive_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vec Rng::uniform_vec(int d, double lo, double hi) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = lo + (hi - lo) * next_double();
  return v;
}

Vec Rng::gaussian_vec(int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = next_gaussian();
  return v;
}

Vec Rng::on_sphere(int d, double radius) {
  Vec v = gaussian_vec(d);
  double n = v.norm();
  while (n < 1e-300) {  // astronomically unlikely; redraw keeps the contract total
    v = gaussian_vec(d);
    n = v.norm();
  }
  return v * (radius / n);
}

Vec Rng::in_ball(int d, double radius) {
  const Vec dir = on_sphere(d, 1.0);
  const double r = radius * std::pow(next_double(), 1.0 / d);
  return dir * r;
}

}  // namespace omdlab
