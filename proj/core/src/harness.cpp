#include "omdlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "omdlab/csv.hpp"

namespace omdlab {

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw invalid_input("fit_loglog: length mismatch");
  if (xs.size() < 3) throw invalid_input("fit_loglog: need at least 3 points");
  const size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw invalid_input("fit_loglog: abscissae and ordinates must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    for (size_t j = 0; j < i; ++j) {
      if (lx[i] == lx[j]) throw invalid_input("fit_loglog: abscissae must be distinct");
    }
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.points = static_cast<int>(n);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  return fit;
}

namespace {

// Averaged loss F = (1/T) sum_t f_t with closed forms for the generator
// kinds, so comparator solves stay O(d) per iteration.
struct AvgLoss {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  double grad_lipschitz = 0.0;
};

AvgLoss make_avg_loss(const LossSequence& losses) {
  AvgLoss avg;
  const int T = losses.horizon();
  bool all_linear = true;
  for (const auto& f : losses.oracles) all_linear &= f.kind() == LossKind::Linear;
  if (all_linear) {
    Vec mean = Vec::Zero(losses.oracles.front().dim());
    for (const auto& f : losses.oracles) mean += f.coeff();
    mean /= static_cast<double>(T);
    avg.value = [mean](const Vec& x) { return mean.dot(x); };
    avg.grad = [mean](const Vec&) { return mean; };
    return avg;
  }
  if (losses.spec.kind == SequenceKind::FixedQuadratic) {
    const LossOracle f = losses.oracles.front();
    avg.value = [f](const Vec& x) { return f.value(x); };
    avg.grad = [f](const Vec& x) { return f.grad(x); };
    avg.grad_lipschitz = 2.0 * f.scale() * f.coeff().squaredNorm();
    return avg;
  }
  const auto* seq = &losses;
  avg.value = [seq, T](const Vec& x) {
    double s = 0.0;
    for (const auto& f : seq->oracles) s += f.value(x);
    return s / T;
  };
  avg.grad = [seq, T](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    for (const auto& f : seq->oracles) g += f.grad(x);
    return Vec(g / T);
  };
  return avg;
}

double gradient_mapping(const Domain& domain, const AvgLoss& avg, const Vec& x) {
  return (x - euclid_project(domain, x - avg.grad(x)).point).norm();
}

// Dense-grid minimizer for low dimension; the cross-check oracle.
std::optional<std::pair<Vec, double>> grid_minimize(const Domain& domain,
                                                    const std::function<double(const Vec&)>& f,
                                                    double resolution) {
  const int d = domain.dim();
  if (d > 3) return std::nullopt;
  double lo = 0.0, hi = 0.0;
  switch (domain.kind()) {
    case DomainKind::SmoothedSimplex: lo = domain.eps_min(); hi = 1.0; break;
    case DomainKind::Box: lo = domain.lo(); hi = domain.hi(); break;
    case DomainKind::PositiveBall: lo = domain.floor(); hi = domain.radius(); break;
  }
  const int n = static_cast<int>(std::floor((hi - lo) / resolution)) + 1;
  Vec x(d);
  Vec best;
  double best_val = std::numeric_limits<double>::infinity();
  auto consider = [&]() {
    if (!membership(domain, x, 1e-12)) return;
    const double v = f(x);
    if (v < best_val) {
      best_val = v;
      best = x;
    }
  };
  for (int i = 0; i < n; ++i) {
    x[0] = lo + i * resolution;
    if (d == 1) {
      consider();
      continue;
    }
    for (int j = 0; j < n; ++j) {
      x[1] = lo + j * resolution;
      if (domain.kind() == DomainKind::SmoothedSimplex && x[0] + x[1] > 1.0 + 1e-12) break;
      if (d == 2) {
        consider();
        continue;
      }
      for (int k = 0; k < n; ++k) {
        x[2] = lo + k * resolution;
        if (domain.kind() == DomainKind::SmoothedSimplex && x[0] + x[1] + x[2] > 1.0 + 1e-12) break;
        consider();
      }
    }
  }
  if (best.size() == 0) return std::nullopt;
  return std::make_pair(best, best_val);
}

}  // namespace

ComparatorResult compute_comparator(const LossSequence& losses, const GeometryPair& pair) {
  if (losses.horizon() < 1) throw invalid_input("compute_comparator: empty loss sequence");
  const Domain& domain = pair.primal;
  const AvgLoss avg = make_avg_loss(losses);
  const long long budget = std::max<long long>(2000, 50LL * losses.horizon());

  Vec x = domain_center(domain);
  Vec best = x;
  double best_gm = gradient_mapping(domain, avg, x);
  const double c0 = 1.0 / (1.0 + avg.grad(x).norm());

  long long last_improvement = 0;
  for (long long s = 1; s <= budget; ++s) {
    double eta = c0 / std::sqrt(static_cast<double>(s));
    const Vec g = avg.grad(x);
    for (int attempt = 0; attempt < 40; ++attempt) {
      try {
        const Vec y = link_invert(pair.reg, link_apply(pair.reg, x) - eta * g);
        x = bregman_project(pair.reg, domain, y).point;
        break;
      } catch (const numerical_error&) {
        eta *= 0.5;  // dual step left the link range; retry shorter
      }
    }
    if (s % 32 == 0 || s == budget) {
      const double gm = gradient_mapping(domain, avg, x);
      if (gm < 0.9 * best_gm) last_improvement = s;
      if (gm < best_gm) {
        best_gm = gm;
        best = x;
      }
      if (best_gm <= 1e-8) break;
      if (s - last_improvement > 4000) break;  // stagnated; hand off to the polish
    }
  }

  // Constant-step polish sharpens the certificate near the solution. Linear
  // objectives take domain-sized steps (any step descends there); smooth
  // ones stay inside the 1/L regime.
  auto polish = [&](Vec point) {
    const double gnorm = avg.grad(point).norm();
    const double alpha = avg.grad_lipschitz > 0.0
                             ? 1.0 / (1.0 + avg.grad_lipschitz)
                             : std::max(1.0, 2.0 * euclid_diameter(domain) / std::max(gnorm, 1e-12));
    for (int k = 0; k < 20000; ++k) {
      const Vec xn = euclid_project(domain, point - alpha * avg.grad(point)).point;
      if ((xn - point).norm() < 1e-16) break;
      if (avg.value(xn) > avg.value(point) + 1e-18) break;
      point = xn;
      if (k % 16 == 0 && gradient_mapping(domain, avg, point) <= 1e-9) break;
    }
    return point;
  };
  best = polish(best);

  if (domain.dim() <= 3) {
    const auto grid = grid_minimize(domain, avg.value, 1e-3);
    if (grid && grid->second < avg.value(best)) {
      best = polish(grid->first);
    }
  }

  ComparatorResult result;
  result.point = best;
  result.value = static_cast<double>(losses.horizon()) * avg.value(best);
  result.certificate = gradient_mapping(domain, avg, best);
  result.certified = result.certificate <= 1e-6;
  result.loss_id = losses.id;
  return result;
}

RegretReport regret_of_trace(const RunTrace& trace, const ComparatorResult& comparator) {
  if (trace.loss_id != comparator.loss_id)
    throw invalid_input("regret_of_trace: trace and comparator come from different loss sequences");
  RegretReport report;
  report.cumulative_loss = trace.cumulative_loss();
  report.comparator_value = comparator.value;
  report.regret = report.cumulative_loss - report.comparator_value;
  report.certificate = comparator.certificate;
  report.comparator_point = comparator.point;
  report.slack =
      comparator.certificate * static_cast<double>(trace.steps.size()) * 2.0 *
      std::max(1.0, report.comparator_point.size() ? report.comparator_point.norm() : 1.0);
  return report;
}

double step_size_theorem(double horizon, double diameter, double smoothness, double grad_bound) {
  if (!(horizon > 0.0) || !(diameter > 0.0) || !(grad_bound > 0.0))
    throw invalid_input("step_size_theorem: arguments must be positive");
  if (!(smoothness > 1.0)) throw invalid_input("step_size_theorem: needs G > 1");
  return std::pow(horizon, -2.0 / 3.0) * std::pow(diameter, 2.0 / 3.0) *
         std::pow(smoothness, -10.0 / 3.0) / grad_bound;
}

double ConstantsReport::core_aggregate() const {
  return std::max({q_first, reg_first, 1.0 + 1e-9});
}

double ConstantsReport::full_aggregate() const {
  return std::max({q_first, q_inv_first, q_inv_second, reg_first, reg_third, 1.0 + 1e-9});
}

ConstantsReport estimate_constants(const GeometryPair& pair, const LossSequence* losses,
                                   int samples, std::uint64_t seed) {
  if (samples < 100) throw invalid_input("estimate_constants: need samples >= 100");
  ConstantsReport report;
  Rng rng = Rng::stream(seed, 0xc0);

  for (int s = 0; s < samples; ++s) {
    const Vec u = sample_interior(pair.reparam, rng, 0.01);
    for (int i = 0; i < u.size(); ++i) {
      const double j = pair.map.jacobian1(u[i]);
      const double jp = pair.map.jacobian_prime1(u[i]);
      report.q_first = std::max(report.q_first, std::abs(j));
      report.q_inv_first = std::max(report.q_inv_first, std::abs(1.0 / j));
      report.q_inv_second = std::max(report.q_inv_second, std::abs(jp / (j * j * j)));
    }
  }

  const int keep = std::min(samples, 300);
  std::vector<Vec> xs;
  xs.reserve(static_cast<size_t>(keep));
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_interior(pair.primal, rng, 0.01);
    for (int i = 0; i < x.size(); ++i) {
      report.reg_first = std::max(report.reg_first, std::abs(pair.reg.grad1(x[i])));
      report.reg_third = std::max(report.reg_third, std::abs(pair.reg.third1(x[i])));
    }
    if (static_cast<int>(xs.size()) < keep) xs.push_back(x);
  }
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = i + 1; j < xs.size(); ++j) {
      report.bregman_diameter = std::max(report.bregman_diameter,
                                          bregman_divergence(pair.reg, xs[i], xs[j]));
      report.bregman_diameter = std::max(report.bregman_diameter,
                                          bregman_divergence(pair.reg, xs[j], xs[i]));
    }
  }

  if (losses != nullptr) {
    const int stride = std::max(1, losses->horizon() / 200);
    for (int t = 1; t <= losses->horizon(); t += stride) {
      const LossOracle& f = losses->at(t);
      for (size_t i = 0; i < xs.size(); i += 4) {
        report.grad_bound = std::max(report.grad_bound, f.grad(xs[i]).norm());
      }
    }
  }
  return report;
}

EtaRule parse_eta_rule(const std::string& name) {
  if (name == "theorem") return EtaRule::Theorem;
  if (name == "sqrt") return EtaRule::Sqrt;
  if (name == "fixed") return EtaRule::Fixed;
  throw config_error("unknown eta rule '" + name + "'");
}

std::string eta_rule_name(EtaRule rule) {
  switch (rule) {
    case EtaRule::Theorem: return "theorem";
    case EtaRule::Sqrt: return "sqrt";
    case EtaRule::Fixed: return "fixed";
  }
  return "?";
}

namespace {

double eta_for(const SweepConfig& config, const ConstantsReport& constants, int horizon) {
  switch (config.eta_rule) {
    case EtaRule::Theorem: {
      const double diameter = std::max(constants.bregman_diameter, 1e-6);
      return step_size_theorem(horizon, diameter, constants.core_aggregate(), config.grad_bound);
    }
    case EtaRule::Sqrt: {
      const double c = config.eta_c > 0.0
                           ? config.eta_c
                           : std::sqrt(2.0 * std::max(constants.bregman_diameter, 1e-6)) /
                                 config.grad_bound;
      return c / std::sqrt(static_cast<double>(horizon));
    }
    case EtaRule::Fixed: return config.fixed_eta;
  }
  return config.fixed_eta;
}

GeometryPair pair_for_horizon(const GeometryPair& base, const SweepConfig& config, int horizon) {
  if (config.eps_exponent <= 0.0 || base.primal.kind() != DomainKind::SmoothedSimplex) return base;
  const double eps = std::pow(static_cast<double>(horizon), -config.eps_exponent);
  const Domain primal = Domain::smoothed_simplex(base.primal.dim(), eps);
  return GeometryPair{base.reg, base.map, primal, map_domain(base.map, primal),
                      base.name + "@T", std::nullopt, std::nullopt};
}

std::uint64_t cell_seed(std::uint64_t seed, int horizon, int rep) {
  return Rng::stream(seed, static_cast<std::uint64_t>(horizon) * 1009ull +
                               static_cast<std::uint64_t>(rep))
      .next_u64();
}

}  // namespace

SweepResult regret_sweep(const GeometryPair& pair, const SweepConfig& config) {
  if (config.horizons.size() < 3) throw invalid_input("regret_sweep: need at least 3 horizons");
  if (config.reps < 1) throw invalid_input("regret_sweep: need reps >= 1");

  SweepResult result;
  result.constants = estimate_constants(pair, nullptr, 1000, config.seed);
  std::map<std::string, ComparatorResult> comparator_cache;

  for (int horizon : config.horizons) {
    const GeometryPair pairT = pair_for_horizon(pair, config, horizon);
    const ConstantsReport constants =
        config.eps_exponent > 0.0 ? estimate_constants(pairT, nullptr, 1000, config.seed)
                                  : result.constants;
    const double eta = eta_for(config, constants, horizon);

    double regret_sum = 0.0;
    for (int rep = 0; rep < config.reps; ++rep) {
      const std::uint64_t s = cell_seed(config.seed, horizon, rep);
      LossSequenceSpec loss_spec;
      loss_spec.kind = config.loss_kind;
      loss_spec.horizon = horizon;
      loss_spec.grad_bound = config.grad_bound;
      loss_spec.seed = s;
      const LossSequence losses = make_sequence(loss_spec, pairT.primal);

      auto found = comparator_cache.find(losses.id);
      if (found == comparator_cache.end()) {
        found = comparator_cache.emplace(losses.id, compute_comparator(losses, pairT)).first;
      }
      const ComparatorResult& comparator = found->second;
      if (!comparator.certified) {
        std::ostringstream os;
        os << "regret_sweep: comparator not certified for " << losses.id << " (gradient mapping "
           << comparator.certificate << ")";
        throw numerical_error(os.str());
      }

      RunConfig run;
      run.kind = config.learner;
      run.eta = eta;
      run.seed = s;
      run.perturbation = config.perturbation;
      run.perturbation.seed = config.perturbation.seed ^ s;
      const RunTrace trace = run_learner(pairT, losses, run);
      if (trace.failed_step >= 0) {
        std::ostringstream os;
        os << "regret_sweep: run failed at step " << trace.failed_step << ": " << trace.failure;
        throw numerical_error(os.str());
      }
      const RegretReport report = regret_of_trace(trace, comparator);
      result.cells.push_back(SweepCell{horizon, eta, s, report.regret, report.comparator_value,
                                       report.certificate});
      regret_sum += report.regret;
    }
    result.horizons.push_back(static_cast<double>(horizon));
    result.mean_regrets.push_back(regret_sum / config.reps);
    const double envelope = std::pow(static_cast<double>(horizon), 2.0 / 3.0) *
                            std::cbrt(std::max(constants.bregman_diameter, 1e-6)) *
                            std::pow(constants.core_aggregate(), 10.0 / 3.0) * config.grad_bound;
    result.theorem_envelope.push_back(envelope);
    if (horizon >= 10000 && result.mean_regrets.back() > 10.0 * envelope) {
      std::fprintf(stderr, "warning: mean regret %.3g exceeds 10x the theorem envelope %.3g at T=%d\n",
                   result.mean_regrets.back(), envelope, horizon);
    }
  }

  double top = 0.0;
  for (double m : result.mean_regrets) top = std::max(top, m);
  if (top > 1e-9) {
    std::vector<double> ys;
    ys.reserve(result.mean_regrets.size());
    for (double m : result.mean_regrets) ys.push_back(std::max(m, 1e-12));
    result.fit = fit_loglog(result.horizons, ys);
  }
  return result;
}

ClosenessResult closeness_sweep(const GeometryPair& pair, const std::vector<double>& etas,
                                int trials, std::uint64_t seed, double grad_bound) {
  if (etas.size() < 3) throw invalid_input("closeness_sweep: need at least 3 step sizes");
  for (double eta : etas) {
    if (!(eta > 0.0)) throw invalid_input("closeness_sweep: step sizes must be positive");
  }
  double lo = etas.front(), hi = etas.front();
  for (double eta : etas) {
    lo = std::min(lo, eta);
    hi = std::max(hi, eta);
  }
  if (std::log10(hi / lo) < 1.5 - 1e-12)
    throw invalid_input("closeness_sweep: step sizes must span at least 1.5 decades");
  if (trials < 1) throw invalid_input("closeness_sweep: need trials >= 1");

  // One draw set shared across step sizes keeps the eta comparison paired.
  std::vector<Vec> starts, grads;
  starts.reserve(static_cast<size_t>(trials));
  grads.reserve(static_cast<size_t>(trials));
  const int d = pair.primal.dim();
  for (int i = 0; i < trials; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    starts.push_back(sample_interior(pair.primal, rng, 0.05));
    grads.push_back(rng.in_ball(d, grad_bound));
  }

  ClosenessResult result;
  result.etas = etas;
  double overall = 0.0;
  for (double eta : etas) {
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
      worst = std::max(worst, coupled_step_distance(pair, starts[i], grads[i], eta));
    }
    result.max_distances.push_back(worst);
    overall = std::max(overall, worst);
  }
  if (overall > 1e-12) {
    std::vector<double> ys;
    for (double v : result.max_distances) ys.push_back(std::max(v, 1e-300));
    result.fit = fit_loglog(result.etas, ys);
  }
  return result;
}

std::vector<PerturbRuleResult> perturbation_sweep(const GeometryPair& pair,
                                                  const SweepConfig& base,
                                                  const std::vector<PerturbationRule>& rules) {
  std::vector<PerturbRuleResult> results;
  results.reserve(rules.size());
  for (PerturbationRule rule : rules) {
    SweepConfig config = base;
    config.learner = LearnerKind::PerturbedOmd;
    config.perturbation.rule = rule;
    PerturbRuleResult out;
    out.rule = rule;
    out.sweep = regret_sweep(pair, config);

    const ConstantsReport& constants = out.sweep.constants;
    const double g = constants.core_aggregate();
    const double gf = config.grad_bound;
    const double diameter = std::max(constants.bregman_diameter, 1e-6);
    for (size_t i = 0; i < out.sweep.horizons.size(); ++i) {
      const double T = out.sweep.horizons[i];
      double eta = 0.0;
      for (const auto& cell : out.sweep.cells) {
        if (cell.horizon == static_cast<int>(T)) {
          eta = cell.eta;
          break;
        }
      }
      PerturbationSpec mag;
      mag.rule = rule;
      mag.kappa = config.perturbation.kappa;
      const double c = mag.magnitude(eta);
      out.bound_smoothness.push_back(c * T * g / eta + diameter / eta + eta * g * g * T / 2.0);
      out.bound_split.push_back(c * T * g / eta + diameter / eta + eta * gf * gf * T / 2.0);
    }
    results.push_back(std::move(out));
  }
  return results;
}

FlowCheckResult flow_check(const GeometryPair& pair, const LossOracle& loss, double tau_end,
                           const std::vector<double>& step_sizes) {
  if (step_sizes.size() < 3) throw invalid_input("flow_check: need at least 3 step sizes");
  for (size_t i = 0; i + 1 < step_sizes.size(); ++i) {
    if (!(step_sizes[i] > step_sizes[i + 1]))
      throw invalid_input("flow_check: step sizes must strictly decrease");
  }
  if (tau_end < 0.0) throw invalid_input("flow_check: need tau_end >= 0");

  FlowCheckResult result;
  result.step_sizes = step_sizes;
  for (double h : step_sizes) {
    if (!(h > 0.0)) throw invalid_input("flow_check: step sizes must be positive");
    const int steps = tau_end == 0.0 ? 0 : static_cast<int>(std::llround(tau_end / h));
    Vec x = domain_center(pair.primal);
    Vec u = reparam_inverse(pair.map, x);
    double deviation = 0.0;
    for (int k = 0; k < steps; ++k) {
      try {
        x = link_invert(pair.reg, link_apply(pair.reg, x) - h * loss.grad(x));
      } catch (const numerical_error& e) {
        throw config_error(std::string("flow_check: mirror trajectory left the link domain; "
                                       "reduce tau_end (") +
                           e.what() + ")");
      }
      const Vec gx = loss.grad(pair.map.forward(u));
      u -= h * chain_gradient(pair.map, u, gx);
      const Vec qu = pair.map.forward(u);
      if (!membership(pair.primal, x, 1e-9) || !membership(pair.primal, qu, 1e-9))
        throw config_error("flow_check: trajectory exits the interior; reduce tau_end");
      deviation = std::max(deviation, (x - qu).norm());
    }
    result.deviations.push_back(deviation);
  }
  result.monotone = true;
  for (size_t i = 0; i + 1 < result.deviations.size(); ++i) {
    const double prev = result.deviations[i], next = result.deviations[i + 1];
    result.ratios.push_back(prev > 0.0 ? next / prev : 0.0);
    if (next > prev) result.monotone = false;
  }
  return result;
}

FigureResult figure_eg_tracking(const FigureConfig& config) {
  const GeometryPair pair = make_eg_pair(config.d, config.eps_min);
  LossSequenceSpec spec;
  spec.kind = SequenceKind::FixedQuadratic;
  spec.horizon = config.horizon;
  spec.grad_bound = config.grad_bound;
  spec.seed = config.seed;
  const LossSequence losses = make_sequence(spec, pair.primal);

  RunConfig eg;
  eg.kind = LearnerKind::Eg;
  eg.eta = config.eta;
  eg.seed = config.seed;
  RunConfig gd = eg;
  gd.kind = LearnerKind::OgdReparam;

  FigureResult result;
  result.eg = run_learner(pair, losses, eg);
  result.ogd = run_learner(pair, losses, gd);
  if (result.eg.failed_step >= 0 || result.ogd.failed_step >= 0)
    throw numerical_error("figure_eg_tracking: a learner run failed mid-way");
  result.domain_diameter = euclid_diameter(pair.primal);
  result.distance.reserve(result.eg.steps.size());
  for (size_t i = 0; i < result.eg.steps.size(); ++i) {
    const double dist = (result.eg.steps[i].x - result.ogd.steps[i].x).norm();
    result.distance.push_back(dist);
    result.max_distance = std::max(result.max_distance, dist);
  }
  return result;
}

std::string trace_csv(const RunTrace& trace) {
  std::vector<std::string> header = {"t", "loss", "grad_norm", "perturb_norm"};
  for (int i = 0; i < trace.dim; ++i) header.push_back("x_" + std::to_string(i));
  if (trace.has_u) {
    for (int i = 0; i < trace.dim; ++i) header.push_back("u_" + std::to_string(i));
  }
  CsvWriter csv(header);
  for (const auto& step : trace.steps) {
    std::vector<CsvWriter::Cell> row = {static_cast<long long>(step.t), step.loss, step.grad_norm,
                                        step.perturb_norm};
    for (int i = 0; i < trace.dim; ++i) row.emplace_back(step.x[i]);
    if (trace.has_u) {
      for (int i = 0; i < trace.dim; ++i) row.emplace_back(step.u[i]);
    }
    csv.row(row);
  }
  return csv.str();
}

std::string sweep_csv(const SweepResult& result) {
  CsvWriter csv({"T", "eta", "seed", "regret", "comparator", "certificate"});
  for (const auto& cell : result.cells) {
    csv.row({static_cast<long long>(cell.horizon), cell.eta, std::to_string(cell.seed),
             cell.regret, cell.comparator, cell.certificate});
  }
  return csv.str();
}

std::string closeness_csv(const ClosenessResult& result) {
  CsvWriter csv({"eta", "max_distance"});
  for (size_t i = 0; i < result.etas.size(); ++i) {
    csv.row({result.etas[i], result.max_distances[i]});
  }
  return csv.str();
}

std::string flow_csv(const FlowCheckResult& result) {
  CsvWriter csv({"h", "deviation"});
  for (size_t i = 0; i < result.step_sizes.size(); ++i) {
    csv.row({result.step_sizes[i], result.deviations[i]});
  }
  return csv.str();
}

std::string figure_csv(const FigureResult& result) {
  const int d = result.eg.dim;
  std::vector<std::string> header = {"t"};
  for (int i = 0; i < d; ++i) header.push_back("eg_x" + std::to_string(i));
  for (int i = 0; i < d; ++i) header.push_back("gd_x" + std::to_string(i));
  header.push_back("distance");
  CsvWriter csv(header);
  for (size_t k = 0; k < result.eg.steps.size(); ++k) {
    std::vector<CsvWriter::Cell> row = {static_cast<long long>(result.eg.steps[k].t)};
    for (int i = 0; i < d; ++i) row.emplace_back(result.eg.steps[k].x[i]);
    for (int i = 0; i < d; ++i) row.emplace_back(result.ogd.steps[k].x[i]);
    row.emplace_back(result.distance[k]);
    csv.row(row);
  }
  return csv.str();
}

std::string perturb_bounds_csv(const std::vector<PerturbRuleResult>& results) {
  CsvWriter csv({"rule", "T", "eta", "mean_regret", "bound_smoothness", "bound_split"});
  for (const auto& rule : results) {
    for (size_t i = 0; i < rule.sweep.horizons.size(); ++i) {
      double eta = 0.0;
      for (const auto& cell : rule.sweep.cells) {
        if (cell.horizon == static_cast<int>(rule.sweep.horizons[i])) {
          eta = cell.eta;
          break;
        }
      }
      csv.row({perturbation_rule_name(rule.rule),
               static_cast<long long>(rule.sweep.horizons[i]), eta, rule.sweep.mean_regrets[i],
               rule.bound_smoothness[i], rule.bound_split[i]});
    }
  }
  return csv.str();
}

std::string constants_csv(const ConstantsReport& report) {
  CsvWriter csv({"grad_bound", "bregman_diameter", "q_first", "q_inv_first", "q_inv_second",
                 "reg_first", "reg_third", "core_aggregate", "full_aggregate"});
  csv.row({report.grad_bound, report.bregman_diameter, report.q_first, report.q_inv_first,
           report.q_inv_second, report.reg_first, report.reg_third, report.core_aggregate(),
           report.full_aggregate()});
  return csv.str();
}

}  // namespace omdlab
