#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omdlab/losses.hpp"
#include "omdlab/pairs.hpp"

namespace omdlab {

struct OmdState {
  Vec x;        // iterate in K
  double eta;   // constant step size
  int t = 1;
};

struct OgdState {
  Vec u;        // iterate in K'
  double eta;
  int t = 1;
};

struct OmdStepResult {
  OmdState next;
  Vec intermediate;  // y_{t+1}, the pre-projection mirror point
  ProjectionResult projection;
};

/// Mirror step: y = (grad R)^{-1}(grad R(x) - eta g), then Bregman-project
/// onto K. Throws numerical_error (advising a smaller step) when the dual
/// step leaves the link's range.
OmdStepResult omd_step(const GeometryPair& pair, const OmdState& state, const Vec& grad);

/// Direct numerical argmin of  g.(x - x_t) + D_R(x || x_t)/eta  over K by
/// projected descent with backtracking; independent oracle for omd_step.
Vec omd_step_proximal(const GeometryPair& pair, const OmdState& state, const Vec& grad);

/// Euclidean step in the reparameterized space: project(u - eta * grad_tilde)
/// onto K'. grad_tilde is the chain-rule pullback of the primal gradient.
OgdState ogd_step(const GeometryPair& pair, const OgdState& state, const Vec& grad_tilde);

/// Closed-form exponentiated-gradient step: Bregman projection of
/// x * exp(-eta g) onto the domain under negative entropy.
Vec eg_step(const Vec& x, const Vec& grad, double eta, const Domain& domain);

enum class PerturbationRule { Zero, LinearEta, Eta32, QuadraticEta };
enum class PerturbationDirection { RandomBall, UphillGradient };

PerturbationRule parse_perturbation_rule(const std::string& name);
std::string perturbation_rule_name(PerturbationRule rule);

/// Per-round perturbation r_t with ||r_t|| <= C(eta). Directions:
///   random-ball     uniform in the C-ball, resampled (up to 20 times) and
///                   then shrunk toward 0 if the perturbed point leaves K
///   uphill-gradient aligned with the revealed loss gradient at the
///                   unperturbed next iterate (the adversarial choice)
struct PerturbationSpec {
  PerturbationRule rule = PerturbationRule::Zero;
  double kappa = 1.0;
  PerturbationDirection direction = PerturbationDirection::RandomBall;
  std::uint64_t seed = 0;

  double magnitude(double eta) const;
};

struct PerturbedStepResult {
  OmdState next;
  Vec realized_r;    // after any feasibility shrink
  Vec requested_r;
};

/// omd_step followed by the additive perturbation r; if x + r leaves K the
/// perturbation is shrunk toward 0 (largest feasible fraction). Rejects
/// ||r|| > c_bound.
PerturbedStepResult perturbed_omd_step(const GeometryPair& pair, const OmdState& state,
                                       const Vec& grad, const Vec& r, double c_bound);

/// One-step coupling probe: sets u_t = q^{-1}(x_t), runs one OMD and one OGD
/// step on the same gradient, returns ||x_{t+1} - q(u_{t+1})||_2.
double coupled_step_distance(const GeometryPair& pair, const Vec& x_t, const Vec& grad_at_x,
                             double eta);

enum class LearnerKind { Omd, OgdReparam, Eg, PerturbedOmd };

LearnerKind parse_learner_kind(const std::string& name);
std::string learner_kind_name(LearnerKind kind);

struct TraceStep {
  int t = 0;
  Vec x;              // primal iterate the loss was charged at
  Vec u;              // reparameterized iterate (OGD only)
  double loss = 0.0;
  double grad_norm = 0.0;
  double perturb_norm = 0.0;
  int proj_iterations = 0;
  double proj_residual = 0.0;
  bool nudged = false;
};

struct RunTrace {
  std::vector<TraceStep> steps;
  std::string pair_name;
  std::string learner;
  std::string loss_id;
  double eta = 0.0;
  int horizon = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  bool has_u = false;
  /// -1 on clean completion; otherwise the step at which a numerical
  /// failure aborted the run (the trace holds the completed prefix).
  int failed_step = -1;
  std::string failure;

  double cumulative_loss() const;
};

struct RunConfig {
  LearnerKind kind = LearnerKind::Omd;
  double eta = 0.1;
  int horizon = 0;               // 0: use the loss sequence's horizon
  PerturbationSpec perturbation;
  bool init_link_zero = false;   // start at the link-zero point instead of the center
  std::uint64_t seed = 0;
};

/// Plays the online protocol: predict, observe the loss, record, update.
/// OGD predicts q(u_t) and is charged the primal loss there.
RunTrace run_learner(const GeometryPair& pair, const LossSequence& losses, const RunConfig& config);

}  // namespace omdlab
