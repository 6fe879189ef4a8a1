#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "omdlab/learners.hpp"
#include "omdlab/reconstruct.hpp"

namespace omdlab {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int points = 0;
};

/// Least squares on (log x, log y). Requires >= 3 points, distinct positive
/// abscissae and positive ordinates.
SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

/// Offline comparator min_{x in K} sum_t f_t(x), solved by long-horizon
/// mirror descent (up to 50 T inner iterations, step c/sqrt(s)) plus a short
/// constant-step polish, certified by the projected-gradient-mapping norm.
/// For d <= 3 a dense grid (resolution 1e-3) cross-checks and the lower
/// value wins.
struct ComparatorResult {
  Vec point;
  double value = 0.0;        // sum over the horizon at the comparator point
  double certificate = 0.0;  // gradient-mapping norm at the point
  bool certified = false;    // certificate <= 1e-6
  std::string loss_id;
};

ComparatorResult compute_comparator(const LossSequence& losses, const GeometryPair& pair);

struct RegretReport {
  double cumulative_loss = 0.0;
  double comparator_value = 0.0;
  double regret = 0.0;
  double certificate = 0.0;
  double slack = 0.0;  // certificate-implied tolerance on negative regret
  Vec comparator_point;
};

/// Sums the trace losses against a comparator for the identical loss
/// sequence; mismatched sequences are rejected.
RegretReport regret_of_trace(const RunTrace& trace, const ComparatorResult& comparator);

/// Theorem step size T^{-2/3} D^{2/3} G^{-10/3} G_F^{-1}.
double step_size_theorem(double horizon, double diameter, double smoothness, double grad_bound);

/// Empirical constants: observed gradient bound, Bregman diameter, and the
/// separate smoothness components (sup |q'|, |(q^-1)'|, |(q^-1)''|, |R'|,
/// |R'''|). The components are reported individually; `core_aggregate`
/// folds only the non-exploding ones (|q'|, |R'|) into the single G the
/// step-size rule consumes, while `full_aggregate` takes them all.
struct ConstantsReport {
  double grad_bound = 0.0;
  double bregman_diameter = 0.0;
  double q_first = 0.0;
  double q_inv_first = 0.0;
  double q_inv_second = 0.0;
  double reg_first = 0.0;
  double reg_third = 0.0;

  double core_aggregate() const;
  double full_aggregate() const;
};

ConstantsReport estimate_constants(const GeometryPair& pair, const LossSequence* losses,
                                   int samples, std::uint64_t seed = 0);

enum class EtaRule { Theorem, Sqrt, Fixed };

EtaRule parse_eta_rule(const std::string& name);
std::string eta_rule_name(EtaRule rule);

struct SweepConfig {
  std::vector<int> horizons;
  EtaRule eta_rule = EtaRule::Sqrt;
  double eta_c = 0.0;       // sqrt rule scale; 0 picks sqrt(2 D_est)/G_F
  double fixed_eta = 0.1;
  int reps = 5;
  std::uint64_t seed = 0;
  LearnerKind learner = LearnerKind::Omd;
  SequenceKind loss_kind = SequenceKind::RandomLinear;
  double grad_bound = 1.0;
  /// > 0 rebuilds a simplex primal with eps_min = T^-exponent per horizon.
  double eps_exponent = 0.0;
  PerturbationSpec perturbation;
};

struct SweepCell {
  int horizon = 0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  double regret = 0.0;
  double comparator = 0.0;
  double certificate = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<double> horizons;
  std::vector<double> mean_regrets;
  std::vector<double> theorem_envelope;  // T^{2/3} D^{1/3} G^{10/3} G_F per horizon
  std::optional<SlopeFit> fit;
  ConstantsReport constants;
};

/// Trial-averaged regret over `reps` fresh seeds per horizon, slope of
/// log mean-regret against log T. Throws numerical_error if any comparator
/// fails certification.
SweepResult regret_sweep(const GeometryPair& pair, const SweepConfig& config);

struct ClosenessResult {
  std::vector<double> etas;
  std::vector<double> max_distances;
  std::optional<SlopeFit> fit;  // absent when the pair's updates coincide
};

/// Per step size: max coupled one-step distance over `trials` random
/// interior starts and random gradients with norm <= grad_bound. The same
/// (start, gradient) draws are reused across step sizes.
ClosenessResult closeness_sweep(const GeometryPair& pair, const std::vector<double>& etas,
                                int trials, std::uint64_t seed, double grad_bound = 1.0);

struct PerturbRuleResult {
  PerturbationRule rule = PerturbationRule::Zero;
  SweepResult sweep;
  /// Lemma-style analytic envelope C T G / eta + D / eta + eta G^2 T / 2 per
  /// horizon, in both substitutions of the gradient-bound constant.
  std::vector<double> bound_smoothness;  // G everywhere
  std::vector<double> bound_split;       // G for Lipschitz term, G_F in the step term
};

/// Runs the perturbed learner for each magnitude rule and reports measured
/// regret slopes next to the analytic envelopes.
std::vector<PerturbRuleResult> perturbation_sweep(const GeometryPair& pair,
                                                  const SweepConfig& base,
                                                  const std::vector<PerturbationRule>& rules);

struct FlowCheckResult {
  std::vector<double> step_sizes;
  std::vector<double> deviations;
  std::vector<double> ratios;  // deviation[i+1] / deviation[i]
  bool monotone = false;
};

/// Discretizes the unprojected mirror flow and the reparameterized gradient
/// flow with each step size and measures the largest trajectory gap
/// max_t ||x(t) - q(u(t))|| over the shared grid.
FlowCheckResult flow_check(const GeometryPair& pair, const LossOracle& loss, double tau_end,
                           const std::vector<double>& step_sizes);

struct FigureConfig {
  int d = 2;
  double eps_min = 1e-3;
  double eta = 0.05;
  int horizon = 200;
  std::uint64_t seed = 0;
  double grad_bound = 1.0;
};

struct FigureResult {
  RunTrace eg;
  RunTrace ogd;
  std::vector<double> distance;
  double max_distance = 0.0;
  double domain_diameter = 0.0;
};

/// Free-running EG and reparameterized OGD from the same start on a fixed
/// quadratic loss; the experiment behind the tracking figure.
FigureResult figure_eg_tracking(const FigureConfig& config);

// CSV emission. Schemas:
//   trace: t,loss,grad_norm,perturb_norm,x_0..x_{d-1}[,u_0..u_{d-1}]
//   sweep: T,eta,seed,regret,comparator,certificate
std::string trace_csv(const RunTrace& trace);
std::string sweep_csv(const SweepResult& result);
std::string closeness_csv(const ClosenessResult& result);
std::string flow_csv(const FlowCheckResult& result);
std::string figure_csv(const FigureResult& result);
std::string perturb_bounds_csv(const std::vector<PerturbRuleResult>& results);
std::string constants_csv(const ConstantsReport& report);

}  // namespace omdlab
