// Acceptance suite: one check per shipped guarantee, each printing a
// [PASS]/[FAIL] line with the measured quantity next to its threshold.
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "omdlab/harness.hpp"
#include "support/oracles.hpp"

using namespace omdlab;

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %-28s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("1. geometry identity") {
  std::vector<GeometryPair> pairs = {make_eg_pair(5), make_log_barrier_pair(5),
                                     make_tempered_pair(5, 0.25), make_tempered_pair(5, 0.5),
                                     make_tempered_pair(5, 0.75)};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& pair : pairs) {
    Stopwatch watch;
    const Assumption1Report rep = verify_assumption1(pair, 1000, 1e-10, 7);
    const double secs = watch.seconds();
    pass = pass && rep.pass && secs < 1.0;
    detail << pair.name << "=" << rep.max_deviation << "(" << secs << "s) ";
  }
  report(1, "geometry identity", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("2. one-step closeness exponent") {
  Stopwatch watch;
  const GeometryPair pair = make_eg_pair(5);
  const ClosenessResult result =
      closeness_sweep(pair, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}, 50, 2026, 1.0);
  REQUIRE(result.fit.has_value());
  const bool in_window = result.fit->slope >= 1.4 && result.fit->slope <= 2.1;
  const bool tight = result.fit->residual_rms <= 0.15;
  const double secs = watch.seconds();
  const bool pass = in_window && tight && secs < 10.0;
  std::ostringstream detail;
  detail << "slope=" << result.fit->slope << " rms=" << result.fit->residual_rms << " ("
         << secs << "s)";
  report(2, "one-step closeness", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("3. reparameterized-ogd regret exponent") {
  Stopwatch watch;
  SweepConfig config;
  config.horizons = {300, 1000, 3000, 10000};
  config.eta_rule = EtaRule::Theorem;
  config.reps = 5;
  config.seed = 11;
  config.learner = LearnerKind::OgdReparam;
  config.loss_kind = SequenceKind::RandomLinear;
  const SweepResult result = regret_sweep(make_eg_pair(5), config);
  REQUIRE(result.fit.has_value());
  const double secs = watch.seconds();
  bool pass = result.fit->slope <= 0.85 && secs < 300.0;
  // At the largest horizon the measured mean regret must sit inside a 10x
  // envelope of the analytic horizon^{2/3} expression with the estimated
  // constants.
  double envelope_ratio = 0.0;
  for (size_t i = 0; i < result.horizons.size(); ++i) {
    if (result.horizons[i] >= 10000.0) {
      envelope_ratio = result.mean_regrets[i] / result.theorem_envelope[i];
      pass = pass && envelope_ratio <= 10.0;
    }
  }
  std::ostringstream detail;
  detail << "slope=" << result.fit->slope << " envelope_ratio=" << envelope_ratio << " (" << secs
         << "s)";
  report(3, "ogd regret exponent", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("4. omd sqrt-rule baseline") {
  Stopwatch watch;
  SweepConfig config;
  config.horizons = {300, 1000, 3000, 10000};
  config.eta_rule = EtaRule::Sqrt;
  config.reps = 5;
  config.seed = 12;
  config.learner = LearnerKind::Omd;
  config.loss_kind = SequenceKind::RandomLinear;
  const SweepResult result = regret_sweep(make_eg_pair(5), config);
  REQUIRE(result.fit.has_value());
  const double secs = watch.seconds();
  const bool pass = result.fit->slope >= 0.35 && result.fit->slope <= 0.65 && secs < 300.0;
  std::ostringstream detail;
  detail << "slope=" << result.fit->slope << " (" << secs << "s)";
  report(4, "omd sqrt baseline", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("5. perturbation interpolation") {
  Stopwatch watch;
  SweepConfig base;
  base.horizons = {300, 1000, 3000, 10000};
  base.eta_rule = EtaRule::Sqrt;
  base.eta_c = 1.0;  // eta = T^{-1/2}
  base.reps = 5;
  base.seed = 13;
  base.loss_kind = SequenceKind::FixedLinear;
  base.perturbation.kappa = 2.0;
  base.perturbation.direction = PerturbationDirection::UphillGradient;
  const auto results = perturbation_sweep(
      make_eg_pair(5), base, {PerturbationRule::QuadraticEta, PerturbationRule::LinearEta});
  double slope_quadratic = 0.0, slope_linear = 0.0;
  for (const auto& rr : results) {
    REQUIRE(rr.sweep.fit.has_value());
    if (rr.rule == PerturbationRule::QuadraticEta) slope_quadratic = rr.sweep.fit->slope;
    if (rr.rule == PerturbationRule::LinearEta) slope_linear = rr.sweep.fit->slope;
  }
  const double secs = watch.seconds();
  const bool pass = slope_quadratic <= 0.75 && slope_linear >= 0.85 && secs < 300.0;
  std::ostringstream detail;
  detail << "slope(eta^2)=" << slope_quadratic << " slope(eta)=" << slope_linear << " (" << secs
         << "s)";
  report(5, "perturbation interpolation", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("6. reconstruction certification") {
  Stopwatch watch;
  bool pass = true;
  std::ostringstream detail;

  const auto qsm = Reparameterization::quarter_square();
  const ScalarMap entropy_map = scalar_map(qsm, qsm.inverse1(0.01), qsm.inverse1(1.0));
  const Regularizer entropy = Regularizer::neg_entropy();
  const ReconstructionReport a = certify_reconstruction(entropy_map, &entropy, 1e-3);
  pass = pass && a.max_ode_residual <= 1e-6 && a.max_hessian_mismatch <= 1e-8;
  detail << "entropy(resid=" << a.max_ode_residual << ",mismatch=" << a.max_hessian_mismatch
         << ") ";

  const ScalarMap barrier_map =
      scalar_map(Reparameterization::exponential(), std::log(0.1), 0.0);
  const Regularizer barrier = Regularizer::log_barrier();
  const ReconstructionReport b = certify_reconstruction(barrier_map, &barrier, 1e-3);
  pass = pass && b.max_ode_residual <= 1e-6 && b.max_hessian_mismatch <= 1e-8;
  detail << "barrier(resid=" << b.max_ode_residual << ",mismatch=" << b.max_hessian_mismatch
         << ") ";

  ReconstructedLink corrupted = reconstruct_link(entropy_map, 1e-3);
  for (size_t i = 0; i < corrupted.grid.size(); ++i)
    corrupted.values[i] += corrupted.grid[i] * corrupted.grid[i];
  corrupted.refit();
  const double control = ode_residual(entropy_map, corrupted, 1.0);
  pass = pass && control > 0.1;
  const double secs = watch.seconds();
  pass = pass && secs < 5.0;
  detail << "control=" << control << " (" << secs << "s)";
  report(6, "reconstruction", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("7. flow equivalence refinement") {
  Stopwatch watch;
  const GeometryPair pair = make_eg_pair(2);
  LossSequenceSpec spec;
  spec.kind = SequenceKind::FixedQuadratic;
  spec.horizon = 1;
  const LossSequence fixed = make_sequence(spec, pair.primal);
  const FlowCheckResult result = flow_check(pair, fixed.at(1), 1.0, {1e-2, 5e-3, 2.5e-3});
  bool pass = result.monotone;
  std::ostringstream detail;
  detail << "ratios=";
  for (double r : result.ratios) {
    pass = pass && r >= 0.3 && r <= 0.7;
    detail << r << " ";
  }
  const double secs = watch.seconds();
  pass = pass && secs < 10.0;
  detail << "(" << secs << "s)";
  report(7, "flow equivalence", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("8. eg tracking figure") {
  Stopwatch watch;
  FigureConfig config;  // d=2, eta=0.05, T=200, fixed quadratic
  const FigureResult result = figure_eg_tracking(config);
  const double frac = result.max_distance / result.domain_diameter;
  const double secs = watch.seconds();
  const bool pass = frac <= 0.05 && secs < 2.0;
  std::ostringstream detail;
  detail << "max_distance=" << result.max_distance << " = " << 100.0 * frac
         << "% of diameter (" << secs << "s)";
  report(8, "eg tracking figure", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("9. oracle equivalence suite") {
  Stopwatch watch;
  bool pass = true;
  std::ostringstream detail;

  // Mirror step vs proximal argmin, 100 triples per built-in pair.
  {
    std::vector<GeometryPair> pairs = {make_eg_pair(3), make_log_barrier_pair(3),
                                       make_tempered_pair(3, 0.5), make_euclidean_pair(3)};
    double worst = 0.0;
    Rng rng(91);
    for (const auto& pair : pairs) {
      for (int i = 0; i < 100; ++i) {
        const Vec x = sample_interior(pair.primal, rng, 0.05);
        const Vec g = rng.in_ball(3, 1.0);
        const double eta = 0.01 + 0.1 * rng.next_double();
        const OmdState state{x, eta, 1};
        const double gap =
            (omd_step(pair, state, g).next.x - omd_step_proximal(pair, state, g))
                .cwiseAbs()
                .maxCoeff();
        worst = std::max(worst, gap);
      }
    }
    pass = pass && worst < 1e-7;
    detail << "prox=" << worst << " ";
  }

  // Projections vs dense grids in d <= 2.
  {
    double worst = 0.0;
    Rng rng(92);
    const Regularizer entropy = Regularizer::neg_entropy();
    for (int d : {1, 2}) {
      const std::vector<Domain> doms = {Domain::smoothed_simplex(d, 0.01),
                                        Domain::box(d, 0.01, 1.0),
                                        Domain::positive_l2_ball(d, 1.5)};
      for (const auto& dom : doms) {
        for (int i = 0; i < 100; ++i) {
          const Vec v = rng.uniform_vec(d, -1.0, 2.5);
          const Vec oracle = oracles::grid_argmin(
              dom, [&](const Vec& x) { return (x - v).squaredNorm(); }, 1e-3);
          worst = std::max(worst,
                           (euclid_project(dom, v).point - oracle).cwiseAbs().maxCoeff());
          const Vec y = rng.uniform_vec(d, 0.1, 2.0);
          const Vec boracle = oracles::grid_argmin(
              dom, [&](const Vec& x) { return oracles::kl_divergence(x, y); }, 1e-3);
          worst = std::max(
              worst, (bregman_project(entropy, dom, y).point - boracle).cwiseAbs().maxCoeff());
        }
      }
    }
    pass = pass && worst < 2e-3;
    detail << "grid=" << worst << " ";
  }

  // Chain gradients vs central differences.
  {
    double worst = 0.0;
    Rng rng(93);
    const std::vector<GeometryPair> pairs = {make_eg_pair(3), make_log_barrier_pair(3),
                                             make_tempered_pair(3, 0.5)};
    for (const auto& pair : pairs) {
      for (int i = 0; i < 67; ++i) {
        const Vec u = sample_interior(pair.reparam, rng, 0.05);
        const Vec a = rng.gaussian_vec(3);
        const double b = rng.next_double();
        const Vec x = pair.map.forward(u);
        const Vec gx = 2.0 * (a.dot(x) - b) * a;
        const Vec analytic = chain_gradient(pair.map, u, gx);
        auto composed = [&](const Vec& w) {
          const double r = a.dot(pair.map.forward(w)) - b;
          return r * r;
        };
        const Vec fd = oracles::fd_gradient(composed, u, 1e-6);
        worst = std::max(worst, (analytic - fd).norm() / (1.0 + analytic.norm()));
      }
    }
    pass = pass && worst < 1e-5;
    detail << "chain=" << worst << " ";
  }

  // Closed-form eg vs generic entropy mirror step.
  {
    double worst = 0.0;
    Rng rng(94);
    const GeometryPair pair = make_eg_pair(4);
    for (int i = 0; i < 200; ++i) {
      const Vec x = sample_interior(pair.primal, rng, 0.02);
      const Vec g = rng.in_ball(4, 1.0);
      const double eta = 0.01 + 0.3 * rng.next_double();
      const Vec closed = eg_step(x, g, eta, pair.primal);
      const Vec generic = omd_step(pair, OmdState{x, eta, 1}, g).next.x;
      worst = std::max(worst, (closed - generic).cwiseAbs().maxCoeff());
    }
    pass = pass && worst < 1e-10;
    detail << "eg=" << worst << " ";
  }

  const double secs = watch.seconds();
  pass = pass && secs < 120.0;
  detail << "(" << secs << "s)";
  report(9, "oracle equivalence", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("10. byte-identical csv replay") {
#ifndef OMDLAB_CLI_PATH
  report(10, "csv determinism", false, "cli path not wired into the build");
  CHECK(false);
#else
  Stopwatch watch;
  const std::string cli = OMDLAB_CLI_PATH;
  bool pass = true;
  std::ostringstream detail;
  const std::vector<std::pair<std::string, std::string>> invocations = {
      {"run", " run --pair eg --d 3 --loss linear --T 50 --eta 0.05 --seed 9 --learner ogd"},
      {"closeness", " closeness --pair eg --d 3 --trials 10 --seed 4"},
      {"perturbed", " run --pair eg --d 3 --loss linear --T 40 --eta 0.05 --seed 9 "
                    "--learner perturbed --rule eta2 --kappa 1.5 --direction random"},
  };
  for (const auto& [name, args] : invocations) {
    const std::string out_a = "/tmp/omdlab_acc10_" + name + "_a.csv";
    const std::string out_b = "/tmp/omdlab_acc10_" + name + "_b.csv";
    const std::string cmd_a = cli + args + " --out " + out_a + " 2>/dev/null";
    const std::string cmd_b = cli + args + " --out " + out_b + " 2>/dev/null";
    const int rc_a = std::system(cmd_a.c_str());
    const int rc_b = std::system(cmd_b.c_str());
    const std::string a = read_file(out_a);
    const std::string b = read_file(out_b);
    const bool same = rc_a == 0 && rc_b == 0 && !a.empty() && a == b;
    pass = pass && same;
    detail << name << (same ? "=identical " : "=DIFFERS ");
  }
  detail << "(" << watch.seconds() << "s)";
  report(10, "csv determinism", pass, detail.str());
  CHECK(pass);
#endif
}
