#include "omdlab/learners.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace omdlab {

OmdStepResult omd_step(const GeometryPair& pair, const OmdState& state, const Vec& grad) {
  require_finite(grad, "omd_step grad");
  if (grad.size() != state.x.size()) throw invalid_input("omd_step: dimension mismatch");
  Vec dual = link_apply(pair.reg, state.x) - state.eta * grad;
  Vec y;
  try {
    y = link_invert(pair.reg, dual);
  } catch (const numerical_error& e) {
    std::ostringstream os;
    os << "omd_step: link inversion out of range at t=" << state.t
       << " (try a smaller eta): " << e.what();
    throw numerical_error(os.str());
  }
  OmdStepResult out;
  out.intermediate = y;
  out.projection = bregman_project(pair.reg, pair.primal, y);
  out.next = OmdState{out.projection.point, state.eta, state.t + 1};
  return out;
}

Vec omd_step_proximal(const GeometryPair& pair, const OmdState& state, const Vec& grad) {
  require_finite(grad, "omd_step_proximal grad");
  const Vec& x0 = state.x;
  const double eta = state.eta;
  const Regularizer& reg = pair.reg;

  auto objective = [&](const Vec& x) -> double {
    for (int i = 0; i < x.size(); ++i) {
      if (reg.requires_positive() && x[i] < 0.0) return std::numeric_limits<double>::infinity();
    }
    double dr = reg.value(x) - reg.value(x0) - reg.grad(x0).dot(x - x0);
    return grad.dot(x - x0) + dr / eta;
  };
  auto gradient = [&](const Vec& x) { return Vec(grad + (reg.grad(x) - reg.grad(x0)) / eta); };
  // Keeps link gradients finite when a projection lands exactly on zero.
  auto positivity_guard = [&](Vec x) {
    if (reg.requires_positive()) x = x.cwiseMax(1e-12);
    return x;
  };

  Vec x = x0;
  double f = objective(x);
  Vec g = gradient(x);
  double alpha = eta;
  Vec prev_x, prev_g;
  int quiet = 0;
  const int max_iters = 200000;
  int it = 0;
  for (; it < max_iters; ++it) {
    // Barzilai-Borwein step where history exists, backtracked to be monotone.
    if (it > 0) {
      const Vec dx = x - prev_x;
      const Vec dg = g - prev_g;
      const double num = dx.dot(dx), den = dx.dot(dg);
      alpha = den > 1e-300 ? num / den : eta;
      alpha = std::min(std::max(alpha, 1e-14), 1e6);
    }
    Vec cand;
    double fc = std::numeric_limits<double>::infinity();
    int bt = 0;
    for (; bt < 60; ++bt) {
      cand = positivity_guard(euclid_project(pair.primal, x - alpha * g).point);
      fc = objective(cand);
      if (fc <= f - 1e-18) break;
      alpha *= 0.5;
    }
    if (bt == 60) break;  // no descent direction left at machine resolution
    prev_x = x;
    prev_g = g;
    x = cand;
    g = gradient(x);
    const double drop = f - fc;
    f = fc;
    if (drop <= 1e-14 * std::max(1.0, std::abs(f))) {
      if (++quiet >= 6) break;
    } else {
      quiet = 0;
    }
  }
  // Stall certificate: the raw projected-gradient step length vanishes at
  // the solution for any step scale, and stays macroscopic if the solver
  // parked somewhere wrong.
  const double gm = (x - euclid_project(pair.primal, x - eta * g).point).norm();
  if (gm > 1e-6) {
    std::ostringstream os;
    os << "omd_step_proximal: inner solver stalled (projected step " << gm << " after " << it
       << " iterations, objective " << f << ")";
    throw numerical_error(os.str());
  }
  return x;
}

OgdState ogd_step(const GeometryPair& pair, const OgdState& state, const Vec& grad_tilde) {
  require_finite(grad_tilde, "ogd_step grad");
  if (grad_tilde.size() != state.u.size()) throw invalid_input("ogd_step: dimension mismatch");
  const Vec v = state.u - state.eta * grad_tilde;
  return OgdState{euclid_project(pair.reparam, v).point, state.eta, state.t + 1};
}

Vec eg_step(const Vec& x, const Vec& grad, double eta, const Domain& domain) {
  require_finite(x, "eg_step x");
  require_finite(grad, "eg_step grad");
  if ((x.array() <= 0.0).any()) throw invalid_input("eg_step: x must be strictly positive");
  const Vec y = x.array() * (-eta * grad.array()).exp();
  return bregman_project(Regularizer::neg_entropy(), domain, y).point;
}

PerturbationRule parse_perturbation_rule(const std::string& name) {
  if (name == "zero") return PerturbationRule::Zero;
  if (name == "eta") return PerturbationRule::LinearEta;
  if (name == "eta32" || name == "eta1.5") return PerturbationRule::Eta32;
  if (name == "eta2") return PerturbationRule::QuadraticEta;
  throw config_error("unknown perturbation rule '" + name + "'");
}

std::string perturbation_rule_name(PerturbationRule rule) {
  switch (rule) {
    case PerturbationRule::Zero: return "zero";
    case PerturbationRule::LinearEta: return "eta";
    case PerturbationRule::Eta32: return "eta32";
    case PerturbationRule::QuadraticEta: return "eta2";
  }
  return "?";
}

double PerturbationSpec::magnitude(double eta) const {
  switch (rule) {
    case PerturbationRule::Zero: return 0.0;
    case PerturbationRule::LinearEta: return kappa * eta;
    case PerturbationRule::Eta32: return kappa * std::pow(eta, 1.5);
    case PerturbationRule::QuadraticEta: return kappa * eta * eta;
  }
  return 0.0;
}

PerturbedStepResult perturbed_omd_step(const GeometryPair& pair, const OmdState& state,
                                       const Vec& grad, const Vec& r, double c_bound) {
  require_finite(r, "perturbed_omd_step r");
  if (r.size() != state.x.size()) throw invalid_input("perturbed_omd_step: dimension mismatch");
  if (r.norm() > c_bound + 1e-12) {
    std::ostringstream os;
    os << "perturbed_omd_step: ||r|| = " << r.norm() << " exceeds the bound C = " << c_bound;
    throw invalid_input(os.str());
  }
  const OmdStepResult base = omd_step(pair, state, grad);
  PerturbedStepResult out;
  out.requested_r = r;
  Vec cand = base.next.x + r;
  if (membership(pair.primal, cand, 1e-9)) {
    out.realized_r = r;
  } else {
    // Largest feasible fraction of r; s = 0 is feasible, so the bracket holds.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (membership(pair.primal, base.next.x + mid * r, 1e-9)) lo = mid; else hi = mid;
    }
    out.realized_r = lo * r;
    cand = base.next.x + out.realized_r;
  }
  out.next = OmdState{cand, state.eta, state.t + 1};
  return out;
}

double coupled_step_distance(const GeometryPair& pair, const Vec& x_t, const Vec& grad_at_x,
                             double eta) {
  if (!membership(pair.primal, x_t, 1e-9))
    throw invalid_input("coupled_step_distance: x_t outside the primal domain");
  const Vec u_t = reparam_inverse(pair.map, x_t);
  const OmdStepResult mirror = omd_step(pair, OmdState{x_t, eta, 1}, grad_at_x);
  const Vec grad_tilde = chain_gradient(pair.map, u_t, grad_at_x);
  const OgdState gd = ogd_step(pair, OgdState{u_t, eta, 1}, grad_tilde);
  return (mirror.next.x - pair.map.forward(gd.u)).norm();
}

LearnerKind parse_learner_kind(const std::string& name) {
  if (name == "omd") return LearnerKind::Omd;
  if (name == "ogd" || name == "ogd-reparam") return LearnerKind::OgdReparam;
  if (name == "eg") return LearnerKind::Eg;
  if (name == "perturbed" || name == "perturbed-omd") return LearnerKind::PerturbedOmd;
  throw config_error("unknown learner '" + name + "'");
}

std::string learner_kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::Omd: return "omd";
    case LearnerKind::OgdReparam: return "ogd-reparam";
    case LearnerKind::Eg: return "eg";
    case LearnerKind::PerturbedOmd: return "perturbed-omd";
  }
  return "?";
}

double RunTrace::cumulative_loss() const {
  double s = 0.0;
  for (const auto& step : steps) s += step.loss;
  return s;
}

namespace {

Vec initial_iterate(const GeometryPair& pair, bool link_zero) {
  if (!link_zero) return domain_center(pair.primal);
  Vec zero = Vec::Zero(pair.primal.dim());
  Vec point;
  try {
    point = link_invert(pair.reg, zero);
  } catch (const numerical_error&) {
    throw config_error("link-zero initialization is undefined for " + pair.reg.name());
  }
  return bregman_project(pair.reg, pair.primal, point).point;
}

// Iterates sitting on an exploding-link boundary get pushed inward a hair;
// the trace records that the nudge happened.
bool nudge_inward(const GeometryPair& pair, Vec& x) {
  if (!pair.reg.requires_positive()) return false;
  const double floor = pair.primal.kind() == DomainKind::SmoothedSimplex
                           ? std::max(pair.primal.eps_min() / 10.0, 1e-12)
                           : 1e-12;
  bool nudged = false;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < floor) {
      x[i] = floor;
      nudged = true;
    }
  }
  if (nudged && !membership(pair.primal, x, 1e-9)) {
    if (pair.primal.kind() == DomainKind::SmoothedSimplex && x.sum() > 1.0) {
      int imax;
      x.maxCoeff(&imax);
      x[imax] -= x.sum() - 1.0;
    } else {
      x = bregman_project(pair.reg, pair.primal, x).point;
    }
  }
  return nudged;
}

}  // namespace

RunTrace run_learner(const GeometryPair& pair, const LossSequence& losses,
                     const RunConfig& config) {
  if (!(config.eta > 0.0)) throw config_error("run_learner: need eta > 0");
  const int horizon = config.horizon > 0 ? config.horizon : losses.horizon();
  if (horizon > losses.horizon())
    throw config_error("run_learner: horizon exceeds the materialized loss sequence");
  if (config.kind == LearnerKind::Eg && pair.reg.kind() != RegKind::NegEntropy)
    throw config_error("run_learner: the eg learner needs the neg-entropy regularizer");

  RunTrace trace;
  trace.pair_name = pair.name;
  trace.learner = learner_kind_name(config.kind);
  trace.loss_id = losses.id;
  trace.eta = config.eta;
  trace.horizon = horizon;
  trace.dim = pair.primal.dim();
  trace.seed = config.seed;
  trace.has_u = config.kind == LearnerKind::OgdReparam;
  trace.steps.reserve(static_cast<size_t>(horizon));

  OmdState omd{initial_iterate(pair, config.init_link_zero), config.eta, 1};
  OgdState ogd{Vec(), config.eta, 1};
  if (trace.has_u) ogd.u = reparam_inverse(pair.map, omd.x);
  Rng pert_rng = Rng::stream(config.perturbation.seed ^ config.seed, 0x7e57);
  const double c_bound = config.perturbation.magnitude(config.eta);

  for (int t = 1; t <= horizon; ++t) {
    const LossOracle& f = losses.at(t);
    TraceStep rec;
    rec.t = t;
    rec.x = trace.has_u ? pair.map.forward(ogd.u) : omd.x;
    if (trace.has_u) rec.u = ogd.u;
    const Vec grad = f.grad(rec.x);
    rec.loss = f.value(rec.x);
    rec.grad_norm = grad.norm();

    try {
      switch (config.kind) {
        case LearnerKind::Omd: {
          OmdStepResult step = omd_step(pair, omd, grad);
          rec.proj_iterations = step.projection.iterations;
          rec.proj_residual = step.projection.residual;
          omd = step.next;
          break;
        }
        case LearnerKind::Eg: {
          omd.x = eg_step(omd.x, grad, omd.eta, pair.primal);
          omd.t = t + 1;
          break;
        }
        case LearnerKind::OgdReparam: {
          ogd = ogd_step(pair, ogd, chain_gradient(pair.map, ogd.u, grad));
          break;
        }
        case LearnerKind::PerturbedOmd: {
          Vec r = Vec::Zero(trace.dim);
          if (c_bound > 0.0) {
            if (config.perturbation.direction == PerturbationDirection::UphillGradient) {
              const Vec base = omd_step(pair, omd, grad).next.x;
              const Vec g_at_base = f.grad(base);
              const double n = g_at_base.norm();
              if (n > 1e-15) r = (c_bound / n) * g_at_base;
            } else {
              // Resample up to 20 times for a feasible draw; the step itself
              // shrinks the final candidate if every draw pokes outside K.
              const Vec base = omd_step(pair, omd, grad).next.x;
              for (int draw = 0; draw < 20; ++draw) {
                r = pert_rng.in_ball(trace.dim, c_bound);
                if (membership(pair.primal, base + r, 1e-9)) break;
              }
            }
          }
          PerturbedStepResult step = perturbed_omd_step(pair, omd, grad, r, c_bound);
          rec.perturb_norm = step.realized_r.norm();
          omd = step.next;
          break;
        }
      }
      if (!trace.has_u) {
        rec.nudged = nudge_inward(pair, omd.x);
        if (!membership(pair.primal, omd.x, 1e-8))
          throw numerical_error("iterate left the primal domain");
      } else if (!membership(pair.reparam, ogd.u, 1e-8)) {
        throw numerical_error("iterate left the reparameterized domain");
      }
    } catch (const numerical_error& e) {
      trace.steps.push_back(std::move(rec));
      trace.failed_step = t;
      trace.failure = e.what();
      return trace;
    }
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace omdlab
