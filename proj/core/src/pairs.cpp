#include "omdlab/pairs.hpp"

#include <cmath>
#include <sstream>

namespace omdlab {

GeometryPair make_eg_pair(int d, double eps_min) {
  const Domain primal = Domain::smoothed_simplex(d, eps_min);
  const Reparameterization q = Reparameterization::quarter_square();
  std::ostringstream name;
  name << "eg(d=" << d << ",eps=" << eps_min << ")";
  return GeometryPair{Regularizer::neg_entropy(), q, primal, map_domain(q, primal), name.str(),
                      std::nullopt, std::nullopt};
}

GeometryPair make_log_barrier_pair(int d, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw config_error("log-barrier pair needs eps in (0,1)");
  const Domain primal = Domain::box(d, eps, 1.0);
  const Reparameterization q = Reparameterization::exponential();
  std::ostringstream name;
  name << "logbarrier(d=" << d << ",eps=" << eps << ")";
  return GeometryPair{Regularizer::log_barrier(), q, primal, map_domain(q, primal), name.str(),
                      std::nullopt, std::nullopt};
}

GeometryPair make_tempered_pair(int d, double tau, double p) {
  const Domain primal = Domain::positive_ball(d, p, 1.0);
  const Reparameterization q = Reparameterization::power(tau);
  std::ostringstream name;
  name << "tempered(d=" << d << ",tau=" << tau << ",p=" << p << ")";
  return GeometryPair{Regularizer::tempered(tau), q, primal, map_domain(q, primal), name.str(),
                      std::nullopt, std::nullopt};
}

GeometryPair make_euclidean_pair(int d) {
  const Domain box = Domain::box(d, 0.0, 1.0);
  std::ostringstream name;
  name << "euclid(d=" << d << ")";
  return GeometryPair{Regularizer::euclidean(), Reparameterization::identity(), box, box,
                      name.str(), std::nullopt, std::nullopt};
}

Assumption1Report verify_assumption1(const GeometryPair& pair, int num_samples, double tol,
                                     std::uint64_t seed) {
  if (num_samples < 1) throw invalid_input("verify_assumption1: need num_samples >= 1");
  Rng rng = Rng::stream(seed, 0x9e0);
  Assumption1Report report;
  report.samples = num_samples;
  for (int s = 0; s < num_samples; ++s) {
    const Vec u = sample_interior(pair.reparam, rng, 0.05);
    const Vec x = pair.map.forward(u);
    const Vec j = pair.map.jacobian_diag(u);
    double dev = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      dev = std::max(dev, std::abs(1.0 / pair.reg.hess1(x[i]) - j[i] * j[i]));
    }
    if (dev >= report.max_deviation) {
      report.max_deviation = dev;
      report.worst_point = u;
    }
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

}  // namespace omdlab
