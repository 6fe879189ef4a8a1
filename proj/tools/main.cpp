// omdlab: experiment CLI for online mirror descent, its reparameterized
// gradient-descent counterpart, and the verification harness around them.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 verification/acceptance check failed.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "omdlab/csv.hpp"
#include "omdlab/harness.hpp"
#include "omdlab/svg.hpp"

using namespace omdlab;

namespace {

struct CommonOpts {
  std::string pair = "eg";
  double tau = 0.5;
  double p = 2.0;
  int d = 5;
  double eps_min = 1e-3;
  std::string loss = "linear";
  int horizon = 1000;
  std::string eta = "auto";
  std::uint64_t seed = 0;
  int reps = 5;
  std::string out;
  double grad_bound = 1.0;
  std::string config_path;
};

// `key = value` config support: the file's settings are spliced in as
// --key=value tokens right after the subcommand, so explicit command-line
// flags (parsed last) override them.
std::vector<std::string> splice_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2 || args[1].rfind('-', 0) == 0) return args;
  std::string path;
  for (size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream file(path);
  if (!file) throw config_error("cannot open config file '" + path + "'");
  std::vector<std::string> spliced(args.begin(), args.begin() + 2);
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(file, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) continue;
    spliced.push_back("--" + key + "=" + value);
  }
  spliced.insert(spliced.end(), args.begin() + 2, args.end());
  return spliced;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--pair", o.pair, "geometry pair: eg|logbarrier|tempered|euclid")
      ->capture_default_str();
  cmd->add_option("--tau", o.tau, "temperature for the tempered pair")->capture_default_str();
  cmd->add_option("--p", o.p, "lp-ball exponent for the tempered pair")->capture_default_str();
  cmd->add_option("--d", o.d, "dimension")->capture_default_str();
  cmd->add_option("--eps-min", o.eps_min, "simplex floor / box lower end")->capture_default_str();
  cmd->add_option("--loss", o.loss, "loss kind: linear|quadratic|alternating|fixed-linear")
      ->capture_default_str();
  cmd->add_option("--T", o.horizon, "horizon")->capture_default_str();
  cmd->add_option("--eta", o.eta, "step size (auto or a number)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "base seed")->capture_default_str();
  cmd->add_option("--reps", o.reps, "trials per sweep point")->capture_default_str();
  cmd->add_option("--out", o.out, "output path (CSV; prefix for multi-file commands)");
  cmd->add_option("--gf", o.grad_bound, "loss gradient bound G_F")->capture_default_str();
  cmd->add_option("--config", o.config_path,
                  "plain-text key = value file; command-line flags override");
}

GeometryPair build_pair(const CommonOpts& o) {
  if (o.pair == "eg") return make_eg_pair(o.d, o.eps_min);
  if (o.pair == "logbarrier")
    return make_log_barrier_pair(o.d, o.eps_min == 1e-3 ? std::exp(-2.0) : o.eps_min);
  if (o.pair == "tempered") return make_tempered_pair(o.d, o.tau, o.p);
  if (o.pair == "euclid") return make_euclidean_pair(o.d);
  throw config_error("unknown pair '" + o.pair + "'");
}

LossSequence build_losses(const CommonOpts& o, const GeometryPair& pair) {
  LossSequenceSpec spec;
  spec.kind = parse_sequence_kind(o.loss);
  spec.horizon = o.horizon;
  spec.grad_bound = o.grad_bound;
  spec.seed = o.seed;
  return make_sequence(spec, pair.primal);
}

double resolve_eta(const CommonOpts& o, const GeometryPair& pair, LearnerKind kind) {
  if (o.eta != "auto") {
    const double eta = std::stod(o.eta);
    if (!(eta > 0.0)) throw config_error("--eta must be positive");
    return eta;
  }
  const ConstantsReport constants = estimate_constants(pair, nullptr, 1000, o.seed);
  if (kind == LearnerKind::OgdReparam) {
    return step_size_theorem(o.horizon, std::max(constants.bregman_diameter, 1e-6),
                             constants.core_aggregate(), o.grad_bound);
  }
  const double c = std::sqrt(2.0 * std::max(constants.bregman_diameter, 1e-6)) / o.grad_bound;
  return c / std::sqrt(static_cast<double>(o.horizon));
}

void write_or_print(const std::string& out, const std::string& csv) {
  if (out.empty() || out == "-") {
    std::fputs(csv.c_str(), stdout);
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw config_error("cannot open '" + out + "' for writing");
  file << csv;
}

// ---------------------------------------------------------------- commands

int cmd_check_geometry(const CommonOpts& o, bool all, int samples, double tol) {
  std::vector<GeometryPair> pairs;
  if (all) {
    pairs.push_back(make_eg_pair(o.d, o.eps_min));
    pairs.push_back(make_log_barrier_pair(o.d));
    for (double tau : {0.25, 0.5, 0.75}) pairs.push_back(make_tempered_pair(o.d, tau, 2.0));
  } else {
    pairs.push_back(build_pair(o));
  }
  CsvWriter csv({"pair", "samples", "max_deviation", "pass", "seconds"});
  bool ok = true;
  for (const auto& pair : pairs) {
    const auto start = std::chrono::steady_clock::now();
    const Assumption1Report report = verify_assumption1(pair, samples, tol, o.seed);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-28s samples=%d max_deviation=%.3e pass=%s (%.3fs)\n", pair.name.c_str(),
                report.samples, report.max_deviation, report.pass ? "yes" : "NO", secs);
    csv.row({pair.name, static_cast<long long>(report.samples), report.max_deviation,
             std::string(report.pass ? "1" : "0"), secs});
    ok = ok && report.pass;
  }
  if (!o.out.empty()) csv.write_file(o.out);
  return ok ? 0 : 3;
}

int cmd_run(const CommonOpts& o, const std::string& learner, const std::string& rule_name,
            double kappa, const std::string& direction, bool init_link_zero) {
  const GeometryPair pair = build_pair(o);
  const LossSequence losses = build_losses(o, pair);
  RunConfig config;
  config.kind = parse_learner_kind(learner);
  config.eta = resolve_eta(o, pair, config.kind);
  config.seed = o.seed;
  config.init_link_zero = init_link_zero;
  if (config.kind == LearnerKind::PerturbedOmd) {
    config.perturbation.rule = parse_perturbation_rule(rule_name);
    config.perturbation.kappa = kappa;
    config.perturbation.direction = direction == "uphill" ? PerturbationDirection::UphillGradient
                                                          : PerturbationDirection::RandomBall;
    config.perturbation.seed = o.seed;
  }
  const RunTrace trace = run_learner(pair, losses, config);
  write_or_print(o.out, trace_csv(trace));
  if (trace.failed_step >= 0) {
    std::fprintf(stderr, "run failed at step %d: %s\n", trace.failed_step, trace.failure.c_str());
    return 2;
  }
  std::fprintf(stderr, "run ok: pair=%s learner=%s T=%d eta=%.6g cumulative_loss=%.8g\n",
               pair.name.c_str(), trace.learner.c_str(), trace.horizon, trace.eta,
               trace.cumulative_loss());
  return 0;
}

int cmd_closeness(const CommonOpts& o, std::vector<double> etas, int trials, bool check,
                  double slope_lo, double slope_hi, double rms_max) {
  const GeometryPair pair = build_pair(o);
  const ClosenessResult result = closeness_sweep(pair, etas, trials, o.seed, o.grad_bound);
  write_or_print(o.out, closeness_csv(result));
  if (result.fit) {
    std::fprintf(stderr, "closeness: slope=%.4f residual_rms=%.4f\n", result.fit->slope,
                 result.fit->residual_rms);
    if (check && (result.fit->slope < slope_lo || result.fit->slope > slope_hi ||
                  result.fit->residual_rms > rms_max))
      return 3;
  } else {
    std::fprintf(stderr, "closeness: updates coincide (all distances <= 1e-12), fit skipped\n");
  }
  return 0;
}

int cmd_regret_sweep(const CommonOpts& o, const std::string& learner, const std::string& rule,
                     std::vector<int> horizons, double eta_c, double eps_exponent, bool check,
                     double slope_lo, double slope_hi) {
  const GeometryPair pair = build_pair(o);
  SweepConfig config;
  config.horizons = std::move(horizons);
  config.eta_rule = parse_eta_rule(rule);
  config.eta_c = eta_c;
  if (o.eta != "auto") {
    config.eta_rule = EtaRule::Fixed;
    config.fixed_eta = std::stod(o.eta);
  }
  config.reps = o.reps;
  config.seed = o.seed;
  config.learner = parse_learner_kind(learner);
  config.loss_kind = parse_sequence_kind(o.loss);
  config.grad_bound = o.grad_bound;
  config.eps_exponent = eps_exponent;
  const SweepResult result = regret_sweep(pair, config);
  write_or_print(o.out, sweep_csv(result));
  if (result.fit) {
    std::fprintf(stderr, "regret-sweep: learner=%s rule=%s slope=%.4f residual_rms=%.4f\n",
                 learner.c_str(), rule.c_str(), result.fit->slope, result.fit->residual_rms);
    if (check && (result.fit->slope < slope_lo || result.fit->slope > slope_hi)) return 3;
  } else {
    std::fprintf(stderr, "regret-sweep: all mean regrets ~ 0, slope fit skipped\n");
  }
  return 0;
}

int cmd_perturb_sweep(const CommonOpts& o, std::vector<std::string> rules,
                      std::vector<int> horizons, double kappa, const std::string& direction,
                      double eta_c, bool check) {
  const GeometryPair pair = build_pair(o);
  SweepConfig base;
  base.horizons = std::move(horizons);
  base.eta_rule = EtaRule::Sqrt;
  base.eta_c = eta_c;
  base.reps = o.reps;
  base.seed = o.seed;
  base.loss_kind = parse_sequence_kind(o.loss);
  base.grad_bound = o.grad_bound;
  base.perturbation.kappa = kappa;
  base.perturbation.direction = direction == "uphill" ? PerturbationDirection::UphillGradient
                                                      : PerturbationDirection::RandomBall;
  base.perturbation.seed = o.seed;
  std::vector<PerturbationRule> parsed;
  for (const auto& r : rules) parsed.push_back(parse_perturbation_rule(r));

  const auto results = perturbation_sweep(pair, base, parsed);
  write_or_print(o.out, perturb_bounds_csv(results));
  bool ok = true;
  for (const auto& rr : results) {
    const std::string name = perturbation_rule_name(rr.rule);
    if (rr.sweep.fit) {
      std::fprintf(stderr, "perturb-sweep: rule=%s slope=%.4f\n", name.c_str(),
                   rr.sweep.fit->slope);
      if (check && rr.rule == PerturbationRule::QuadraticEta && rr.sweep.fit->slope > 0.75)
        ok = false;
      if (check && rr.rule == PerturbationRule::LinearEta && rr.sweep.fit->slope < 0.85)
        ok = false;
    } else {
      std::fprintf(stderr, "perturb-sweep: rule=%s regret ~ 0, fit skipped\n", name.c_str());
    }
  }
  return ok ? 0 : 3;
}

int cmd_flow_check(const CommonOpts& o, std::vector<double> hs, double tau_end, bool check) {
  const GeometryPair pair = build_pair(o);
  LossSequenceSpec spec;
  spec.kind = SequenceKind::FixedQuadratic;
  spec.horizon = 1;
  spec.grad_bound = o.grad_bound;
  spec.seed = o.seed;
  const LossSequence fixed = make_sequence(spec, pair.primal);
  const FlowCheckResult result = flow_check(pair, fixed.at(1), tau_end, hs);
  write_or_print(o.out, flow_csv(result));
  bool ok = result.monotone;
  for (size_t i = 0; i < result.ratios.size(); ++i) {
    std::fprintf(stderr, "flow-check: h=%.4g -> %.4g deviation ratio %.4f\n",
                 result.step_sizes[i], result.step_sizes[i + 1], result.ratios[i]);
    if (result.ratios[i] < 0.3 || result.ratios[i] > 0.7) ok = false;
  }
  return (!check || ok) ? 0 : 3;
}

int cmd_figure_eg(const CommonOpts& o, bool check) {
  FigureConfig config;
  config.d = o.d;
  config.eps_min = o.eps_min;
  config.eta = o.eta == "auto" ? 0.05 : std::stod(o.eta);
  config.horizon = o.horizon;
  config.seed = o.seed;
  config.grad_bound = o.grad_bound;
  const FigureResult result = figure_eg_tracking(config);

  const std::string prefix = o.out.empty() ? std::string("figure-eg") : o.out;
  const std::string csv_path = prefix + ".csv";
  const std::string svg_path = prefix + ".svg";
  std::ofstream(csv_path, std::ios::binary) << figure_csv(result);

  std::vector<PlotSeries> series;
  if (config.d == 2) {
    PlotSeries eg{"eg", {}, {}}, gd{"ogd-reparam", {}, {}};
    for (const auto& s : result.eg.steps) {
      eg.x.push_back(s.x[0]);
      eg.y.push_back(s.x[1]);
    }
    for (const auto& s : result.ogd.steps) {
      gd.x.push_back(s.x[0]);
      gd.y.push_back(s.x[1]);
    }
    series = {eg, gd};
    write_line_plot(svg_path, series, {"eg vs reparameterized ogd iterates", "x_0", "x_1"});
  } else {
    PlotSeries dist{"distance", {}, {}};
    for (size_t i = 0; i < result.distance.size(); ++i) {
      dist.x.push_back(static_cast<double>(i + 1));
      dist.y.push_back(result.distance[i]);
    }
    series = {dist};
    write_line_plot(svg_path, series, {"eg / ogd trajectory distance", "t", "distance"});
  }
  const double frac = result.max_distance / result.domain_diameter;
  std::fprintf(stderr, "figure-eg: max distance %.6g (%.2f%% of the domain diameter); wrote %s, %s\n",
               result.max_distance, 100.0 * frac, csv_path.c_str(), svg_path.c_str());
  return (!check || frac <= 0.05) ? 0 : 3;
}

int cmd_reconstruct(const CommonOpts& o, const std::string& map_name, double x_lo, double x_hi,
                    double ci, double h_max, bool control) {
  Reparameterization q = Reparameterization::quarter_square();
  const Regularizer* known = nullptr;
  Regularizer reg = Regularizer::neg_entropy();
  if (map_name == "quarter-square") {
    q = Reparameterization::quarter_square();
    reg = Regularizer::neg_entropy();
    known = &reg;
  } else if (map_name == "exponential") {
    q = Reparameterization::exponential();
    reg = Regularizer::log_barrier();
    known = &reg;
  } else if (map_name == "power") {
    q = Reparameterization::power(o.tau);
    reg = Regularizer::tempered(o.tau);
    known = &reg;
  } else if (map_name == "identity") {
    q = Reparameterization::identity();
    reg = Regularizer::euclidean();
    known = &reg;
  } else {
    throw config_error("unknown map '" + map_name + "'");
  }
  const double u_lo = q.inverse1(x_lo), u_hi = q.inverse1(x_hi);
  ScalarMap map = scalar_map(q, std::min(u_lo, u_hi), std::max(u_lo, u_hi), ci);

  const ReconstructionReport report = certify_reconstruction(map, known, h_max);
  std::printf("reconstruct: map=%s interval x=[%.4g, %.4g] grid=%d\n", map_name.c_str(), x_lo,
              x_hi, report.grid_points);
  std::printf("  max ODE residual      %.3e\n", report.max_ode_residual);
  std::printf("  max Hessian mismatch  %.3e (relative)\n", report.max_hessian_mismatch);
  std::printf("  strong convexity floor %.6g\n", report.strong_convexity_floor);

  double control_residual = 0.0;
  if (control) {
    ReconstructedLink corrupted = reconstruct_link(map, h_max);
    for (size_t i = 0; i < corrupted.grid.size(); ++i) {
      corrupted.values[i] += corrupted.grid[i] * corrupted.grid[i];
    }
    corrupted.refit();
    const double u_mid = 0.5 * (map.lower + map.upper);
    const double u_probe = (map.lower < 1.0 && 1.0 < map.upper) ? 1.0 : u_mid;
    control_residual = ode_residual(map, corrupted, u_probe);
    std::printf("  corrupted-link residual %.3e at u=%.4g (expected > 0.1)\n", control_residual,
                u_probe);
  }

  if (!o.out.empty()) {
    const ReconstructedLink link = reconstruct_link(map, h_max);
    CsvWriter csv({"u", "link", "ode_residual"});
    for (size_t i = 1; i + 1 < link.grid.size(); ++i) {
      csv.row({link.grid[i], link.values[i], ode_residual(map, link, link.grid[i])});
    }
    csv.write_file(o.out);
  }

  const bool ok = report.max_ode_residual <= 1e-6 &&
                  (known == nullptr || report.max_hessian_mismatch <= 1e-8) &&
                  (!control || control_residual > 0.1);
  return ok ? 0 : 3;
}

int cmd_constants(const CommonOpts& o, int samples) {
  const GeometryPair pair = build_pair(o);
  const LossSequence losses = build_losses(o, pair);
  const ConstantsReport report = estimate_constants(pair, &losses, samples, o.seed);
  std::printf("constants for %s over %s:\n", pair.name.c_str(), losses.id.c_str());
  std::printf("  G_F observed          %.6g\n", report.grad_bound);
  std::printf("  Bregman diameter D    %.6g\n", report.bregman_diameter);
  std::printf("  sup |q'|              %.6g\n", report.q_first);
  std::printf("  sup |(q^-1)'|         %.6g\n", report.q_inv_first);
  std::printf("  sup |(q^-1)''|        %.6g\n", report.q_inv_second);
  std::printf("  sup |R'|              %.6g\n", report.reg_first);
  std::printf("  sup |R'''|            %.6g\n", report.reg_third);
  std::printf("  core aggregate G      %.6g\n", report.core_aggregate());
  std::printf("  full aggregate G      %.6g\n", report.full_aggregate());
  if (!o.out.empty()) write_or_print(o.out, constants_csv(report));
  return 0;
}

int cmd_plot(const std::string& in, const std::string& out, std::string x_col,
             std::vector<std::string> y_cols, bool logx, bool logy, const std::string& title) {
  std::ifstream file(in);
  if (!file) throw config_error("cannot open '" + in + "'");
  std::string line;
  if (!std::getline(file, line)) throw config_error("empty csv '" + in + "'");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::vector<std::vector<double>> columns(header.size());
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    size_t i = 0;
    while (std::getline(ss, cell, ',') && i < columns.size()) {
      try {
        columns[i].push_back(std::stod(cell));
      } catch (...) {
        columns[i].push_back(std::numeric_limits<double>::quiet_NaN());
      }
      ++i;
    }
  }
  auto index_of = [&](const std::string& name) -> int {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw config_error("column '" + name + "' not in " + in);
  };
  if (x_col.empty()) x_col = header.front();
  if (y_cols.empty()) {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] != x_col) y_cols.push_back(header[i]);
    }
  }
  const int xi = index_of(x_col);
  std::vector<PlotSeries> series;
  for (const auto& name : y_cols) {
    const int yi = index_of(name);
    PlotSeries s{name, columns[xi], columns[yi]};
    series.push_back(std::move(s));
  }
  PlotOptions options;
  options.title = title.empty() ? in : title;
  options.x_label = x_col;
  options.y_label = y_cols.size() == 1 ? y_cols.front() : "value";
  options.log_x = logx;
  options.log_y = logy;
  write_line_plot(out, series, options);
  std::fprintf(stderr, "plot: wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online mirror descent / reparameterized gradient descent lab"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // check-geometry
  CommonOpts geo_opts;
  int geo_samples = 1000;
  double geo_tol = 1e-10;
  bool geo_all = true;
  auto* geo = app.add_subcommand("check-geometry",
                                 "verify the Hessian/Jacobian identity for built-in pairs");
  add_common(geo, geo_opts);
  geo->add_option("--samples", geo_samples, "interior samples per pair")->capture_default_str();
  geo->add_option("--tol", geo_tol, "deviation tolerance")->capture_default_str();
  geo->add_flag("--single", [&geo_all](std::int64_t) { geo_all = false; },
                "check only the pair given by --pair");

  // run
  CommonOpts run_opts;
  std::string run_learner = "omd", run_rule = "zero", run_direction = "random";
  double run_kappa = 1.0;
  bool run_link_zero = false;
  auto* run = app.add_subcommand("run", "play one learner against a loss sequence, emit the trace");
  add_common(run, run_opts);
  run->add_option("--learner", run_learner, "omd|ogd|eg|perturbed")->capture_default_str();
  run->add_option("--rule", run_rule, "perturbation magnitude rule: zero|eta|eta32|eta2")
      ->capture_default_str();
  run->add_option("--kappa", run_kappa, "perturbation scale")->capture_default_str();
  run->add_option("--direction", run_direction, "perturbation direction: random|uphill")
      ->capture_default_str();
  run->add_flag("--init-link-zero", run_link_zero, "start at the link-zero point");

  // closeness
  CommonOpts close_opts;
  std::vector<double> close_etas = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  int close_trials = 50;
  bool close_check = false;
  double close_lo = 1.4, close_hi = 2.1, close_rms = 0.15;
  auto* close = app.add_subcommand("closeness", "one-step coupled distance across step sizes");
  add_common(close, close_opts);
  close->add_option("--etas", close_etas, "step sizes")->delimiter(',')->capture_default_str();
  close->add_option("--trials", close_trials, "random trials per step size")->capture_default_str();
  close->add_flag("--check", close_check, "exit 3 unless the slope window holds");
  close->add_option("--slope-min", close_lo)->capture_default_str();
  close->add_option("--slope-max", close_hi)->capture_default_str();
  close->add_option("--rms-max", close_rms)->capture_default_str();

  // regret-sweep
  CommonOpts sweep_opts;
  std::string sweep_learner = "omd", sweep_rule = "sqrt";
  std::vector<int> sweep_horizons = {300, 1000, 3000, 10000};
  double sweep_eta_c = 0.0, sweep_eps_exp = 0.0, sweep_lo = -1e9, sweep_hi = 1e9;
  bool sweep_check = false;
  auto* sweep = app.add_subcommand("regret-sweep", "regret vs horizon with a slope fit");
  add_common(sweep, sweep_opts);
  sweep->add_option("--learner", sweep_learner, "omd|ogd|eg")->capture_default_str();
  sweep->add_option("--eta-rule", sweep_rule, "theorem|sqrt|fixed")->capture_default_str();
  sweep->add_option("--horizons", sweep_horizons)->delimiter(',')->capture_default_str();
  sweep->add_option("--eta-c", sweep_eta_c, "scale for the sqrt rule (0 = auto)")
      ->capture_default_str();
  sweep->add_option("--eps-exponent", sweep_eps_exp,
                    "rebuild the simplex with eps_min = T^-exponent per horizon")
      ->capture_default_str();
  sweep->add_flag("--check", sweep_check, "exit 3 unless the slope window holds");
  sweep->add_option("--slope-min", sweep_lo)->capture_default_str();
  sweep->add_option("--slope-max", sweep_hi)->capture_default_str();

  // perturb-sweep
  CommonOpts pert_opts;
  pert_opts.loss = "fixed-linear";
  std::vector<std::string> pert_rules = {"eta", "eta32", "eta2"};
  std::vector<int> pert_horizons = {300, 1000, 3000, 10000};
  double pert_kappa = 2.0, pert_eta_c = 1.0;
  std::string pert_direction = "uphill";
  bool pert_check = false;
  auto* pert = app.add_subcommand("perturb-sweep",
                                  "perturbed mirror descent regret per magnitude rule");
  add_common(pert, pert_opts);
  pert->add_option("--rules", pert_rules, "magnitude rules to sweep")->delimiter(',')
      ->capture_default_str();
  pert->add_option("--horizons", pert_horizons)->delimiter(',')->capture_default_str();
  pert->add_option("--kappa", pert_kappa, "perturbation scale")->capture_default_str();
  pert->add_option("--direction", pert_direction, "random|uphill")->capture_default_str();
  pert->add_option("--eta-c", pert_eta_c, "eta = eta_c / sqrt(T)")->capture_default_str();
  pert->add_flag("--check", pert_check, "exit 3 unless the interpolation windows hold");

  // flow-check
  CommonOpts flow_opts;
  std::vector<double> flow_hs = {1e-2, 5e-3, 2.5e-3};
  double flow_tau = 1.0;
  bool flow_checkf = false;
  auto* flow = app.add_subcommand("flow-check",
                                  "discretized mirror flow vs reparameterized gradient flow");
  add_common(flow, flow_opts);
  flow->add_option("--h-list", flow_hs, "decreasing step sizes")->delimiter(',')
      ->capture_default_str();
  flow->add_option("--tau-end", flow_tau, "flow horizon")->capture_default_str();
  flow->add_flag("--check", flow_checkf, "exit 3 unless deviations halve with h");

  // figure-eg
  CommonOpts fig_opts;
  fig_opts.d = 2;
  fig_opts.horizon = 200;
  fig_opts.eta = "0.05";
  bool fig_check = false;
  auto* fig = app.add_subcommand("figure-eg", "overlaid eg / reparameterized-ogd trajectories");
  add_common(fig, fig_opts);
  fig->add_flag("--check", fig_check, "exit 3 if trajectories drift past 5% of the diameter");

  // reconstruct
  CommonOpts rec_opts;
  std::string rec_map = "quarter-square";
  double rec_xlo = 0.01, rec_xhi = 1.0, rec_c = 0.0, rec_hmax = 1e-3;
  bool rec_control = true;
  auto* rec = app.add_subcommand("reconstruct",
                                 "rebuild the regularizer link from a map and certify it");
  add_common(rec, rec_opts);
  rec->add_option("--map", rec_map, "quarter-square|exponential|power|identity")
      ->capture_default_str();
  rec->add_option("--x-lo", rec_xlo, "image interval lower end")->capture_default_str();
  rec->add_option("--x-hi", rec_xhi, "image interval upper end")->capture_default_str();
  rec->add_option("--ci", rec_c, "integration constant")->capture_default_str();
  rec->add_option("--h-max", rec_hmax, "max grid spacing")->capture_default_str();
  rec->add_flag("!--no-control", rec_control, "skip the corrupted-link negative control");

  // constants
  CommonOpts const_opts;
  int const_samples = 1000;
  auto* consts = app.add_subcommand("constants", "estimate the smoothness/diameter constants");
  add_common(consts, const_opts);
  consts->add_option("--samples", const_samples)->capture_default_str();

  // plot
  std::string plot_in, plot_out = "plot.svg", plot_x, plot_title;
  std::vector<std::string> plot_y;
  bool plot_logx = false, plot_logy = false;
  auto* plot = app.add_subcommand("plot", "render a CSV as a self-contained SVG line plot");
  plot->add_option("--in", plot_in, "input CSV")->required();
  plot->add_option("--out", plot_out, "output SVG")->capture_default_str();
  plot->add_option("--x", plot_x, "x column (default: first)");
  plot->add_option("--y", plot_y, "y columns (default: all others)")->delimiter(',');
  plot->add_flag("--logx", plot_logx);
  plot->add_flag("--logy", plot_logy);
  plot->add_option("--title", plot_title);

  try {
    const std::vector<std::string> args = splice_config_args(argc, argv);
    std::vector<const char*> argv2;
    argv2.reserve(args.size());
    for (const auto& a : args) argv2.push_back(a.c_str());
    app.parse(static_cast<int>(argv2.size()), argv2.data());
    if (geo->parsed())
      return cmd_check_geometry(geo_opts, geo_all, geo_samples, geo_tol);
    if (run->parsed())
      return cmd_run(run_opts, run_learner, run_rule, run_kappa, run_direction, run_link_zero);
    if (close->parsed())
      return cmd_closeness(close_opts, close_etas, close_trials, close_check, close_lo, close_hi,
                           close_rms);
    if (sweep->parsed())
      return cmd_regret_sweep(sweep_opts, sweep_learner, sweep_rule, sweep_horizons, sweep_eta_c,
                              sweep_eps_exp, sweep_check, sweep_lo, sweep_hi);
    if (pert->parsed())
      return cmd_perturb_sweep(pert_opts, pert_rules, pert_horizons, pert_kappa, pert_direction,
                               pert_eta_c, pert_check);
    if (flow->parsed())
      return cmd_flow_check(flow_opts, flow_hs, flow_tau, flow_checkf);
    if (fig->parsed())
      return cmd_figure_eg(fig_opts, fig_check);
    if (rec->parsed())
      return cmd_reconstruct(rec_opts, rec_map, rec_xlo, rec_xhi, rec_c, rec_hmax, rec_control);
    if (consts->parsed())
      return cmd_constants(const_opts, const_samples);
    if (plot->parsed())
      return cmd_plot(plot_in, plot_out, plot_x, plot_y, plot_logx, plot_logy, plot_title);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const invalid_input& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
