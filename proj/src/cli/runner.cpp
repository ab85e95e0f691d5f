#include "sgflab/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "sgflab/bounds.hpp"
#include "sgflab/checks.hpp"
#include "sgflab/errors.hpp"
#include "sgflab/fit.hpp"
#include "sgflab/format.hpp"
#include "sgflab/studies.hpp"
#include "sgflab/version.hpp"

namespace sgflab::cli {

namespace {

using nlohmann::json;

template <class Fn>
auto as_config_error(std::string_view field, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidProblem& e) {
    throw ConfigError(std::string(field), e.what());
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string(field), e.what());
  } catch (const Unsupported& e) {
    throw ConfigError(std::string(field), e.what());
  }
}

Vector broadcast(const ExperimentConfig& cfg, std::string_view key, std::size_t dim) {
  const std::vector<double> v = cfg.get_doubles(key);
  if (v.size() == 1) return Vector(dim, v.front());
  if (v.size() != dim)
    throw ConfigError(std::string(key), "expected 1 or " + std::to_string(dim) + " values, got " +
                                            std::to_string(v.size()));
  return v;
}

std::size_t positive_count(const ExperimentConfig& cfg, std::string_view key, long long min = 1) {
  const long long v = cfg.get_int(key);
  if (v < min) throw ConfigError(std::string(key), "must be >= " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

double positive_double(const ExperimentConfig& cfg, std::string_view key) {
  const double v = cfg.get_double(key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key), "must be a positive finite number");
  return v;
}

int grid_level(const ExperimentConfig& cfg, std::string_view key) {
  const long long v = cfg.get_int(key);
  if (v < 0 || v > 24) throw ConfigError(std::string(key), "must be in [0, 24]");
  return static_cast<int>(v);
}

std::string drift_kind(const ExperimentConfig& cfg, const CompositeProblem& p) {
  std::string d = cfg.get("problem.drift");
  if (d == "auto") d = p.g.kind == TermKind::zero ? "gradient" : "smoothed";
  if (d != "gradient" && d != "smoothed" && d != "operator")
    throw ConfigError("problem.drift", "unknown drift '" + d + "' (valid: auto, gradient, smoothed, operator)");
  return d;
}

json config_echo(const ExperimentConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.entries()) j[k] = v;
  return j;
}

struct BoundSpec {
  std::string name;
  std::map<std::string, double> params;
  std::function<double(double)> fn;
};

struct Context {
  const ExperimentConfig& cfg;
  CompositeProblem problem;
  VolatilitySchedule vol;
  Dynamics dyn;
  std::string drift;
  Vector x0;
};

std::optional<BoundSpec> select_bound(const Context& c, Quantity q) {
  std::string name = c.cfg.get("estimate.bound");
  if (name == "none") return std::nullopt;
  const double s2 = c.vol.sigma_star_sq();
  const double d0 = c.dyn.dist_to_solution(c.x0);
  const double dsq = d0 * d0;
  const SmoothPotential& f = c.problem.f;
  const bool gradient = c.drift == "gradient";
  if (name == "auto") {
    name.clear();
    if (gradient && (q == Quantity::ergodic_objective_gap || q == Quantity::averaged_objective_gap))
      name = "ergodic_convex";
    else if (gradient && q == Quantity::sq_distance && f.strong_mu)
      name = c.vol.alpha > 0.0 && c.vol.sigma0 > 0.0 ? "strongly_convex_split" : "strongly_convex";
    else if (gradient && q == Quantity::objective_gap && c.vol.beta_certificate())
      name = "pointwise_beta";
    else if (gradient && q == Quantity::distance_of_mean_average && f.eb_gamma && f.eb_exponent_p && !f.eb_radius)
      name = "ergodic_distance_eb";
    else if (c.drift == "operator" && q == Quantity::ergodic_operator_norm_sq)
      name = "cocoercive_ergodic";
    else if (c.drift == "smoothed" && q == Quantity::ergodic_objective_gap && c.problem.g.lipschitz_L0)
      name = "moreau_composite";
    if (name.empty()) return std::nullopt;
  }
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw ConfigError("estimate.bound", "bound '" + name + "' " + what);
  };
  BoundSpec b;
  b.name = name;
  if (name == "ergodic_convex") {
    need(gradient, "needs the gradient drift");
    b.params = {{"dist0_sq", dsq}, {"sigma_star_sq", s2}};
    b.fn = [=](double t) { return bound_ergodic_convex(dsq, s2, t); };
  } else if (name == "strongly_convex" || name == "strongly_convex_split") {
    need(gradient && f.strong_mu.has_value(), "needs a strongly convex f and the gradient drift");
    const double mu = *f.strong_mu;
    b.params = {{"dist0_sq", dsq}, {"mu", mu}, {"sigma_star_sq", s2}};
    if (name == "strongly_convex") {
      b.fn = [=](double t) { return bound_strongly_convex(dsq, mu, s2, t); };
    } else {
      const double lambda = c.cfg.get_double("bound.lambda");
      need(lambda > 0.0 && lambda < 1.0, "needs bound.lambda in (0, 1)");
      need(c.vol.decreasing(), "needs a decreasing volatility");
      b.params["lambda"] = lambda;
      NoiseSplit split{lambda, [v = c.vol](double t) { return v.sigma_inf(t); }};
      b.fn = [=](double t) { return bound_strongly_convex(dsq, mu, s2, t, split); };
    }
  } else if (name == "pointwise_beta") {
    const auto cert = c.vol.beta_certificate();
    need(gradient && cert.has_value(), "needs the gradient drift and alpha > 1/2");
    const double K = cert->K, beta = cert->beta, L = f.lipschitz_L;
    b.params = {{"dist0_sq", dsq}, {"K", K}, {"beta", beta}, {"L", L}};
    b.fn = [=](double t) { return bound_pointwise_beta(dsq, K, beta, L, t); };
  } else if (name == "ergodic_distance_eb") {
    need(gradient && f.eb_gamma && f.eb_exponent_p, "needs error-bound data");
    const double g = *f.eb_gamma, p = *f.eb_exponent_p;
    b.params = {{"dist0_sq", dsq}, {"gamma", g}, {"p", p}, {"sigma_star_sq", s2}};
    b.fn = [=](double t) { return bound_ergodic_distance_eb(dsq, g, p, s2, t); };
  } else if (name == "cocoercive_ergodic" || name == "cocoercive_strong") {
    need(c.drift == "operator", "needs the operator drift");
    const CocoerciveOperator op = make_forward_backward_operator(c.problem, c.cfg.get_double("problem.mu"));
    const double rho = op.rho;
    b.params = {{"dist0_sq", dsq}, {"rho", rho}, {"sigma_star_sq", s2}};
    if (name == "cocoercive_ergodic") {
      b.fn = [=](double t) { return bound_cocoercive(dsq, rho, s2, t, true); };
    } else {
      need(op.gamma_strong.has_value(), "needs a strongly monotone operator");
      const double g = *op.gamma_strong;
      b.params["gamma"] = g;
      // The bound is on E‖X − x*‖²/2.
      b.fn = [=](double t) { return 2.0 * bound_cocoercive(dsq, rho, s2, t, false, g); };
    }
  } else if (name == "moreau_composite") {
    need(c.drift == "smoothed" && c.problem.g.lipschitz_L0.has_value(), "needs the smoothed drift and a Lipschitz g");
    const double theta = c.cfg.get_double("problem.theta"), L0 = *c.problem.g.lipschitz_L0;
    b.params = {{"C0", d0}, {"sigma_star_sq", s2}, {"theta", theta}, {"L0", L0}};
    b.fn = [=](double t) {
      return bound_moreau(MoreauVariant::nuevo1_1, {dsq, s2, theta, L0, 0.0, 0.0, 0.0, t});
    };
  } else {
    throw ConfigError("estimate.bound", "unknown bound '" + name + "'");
  }
  return b;
}

Quantity default_quantity(const Context& c) {
  const std::string q = c.cfg.get("estimate.quantity");
  if (!q.empty()) return as_config_error("estimate.quantity", [&] { return parse_quantity(q); });
  if (c.drift == "operator") return Quantity::ergodic_operator_norm_sq;
  if (c.drift == "smoothed") return Quantity::ergodic_objective_gap;
  return c.problem.f.strong_mu ? Quantity::sq_distance : Quantity::ergodic_objective_gap;
}

json fit_json(const RateFit& f) {
  return {{"model", std::string(fit_model_name(f.model))},
          {"exponent", f.exponent},
          {"constant", f.constant},
          {"r2", f.r2},
          {"window", {f.window.t_lo, f.window.t_hi}},
          {"n_points", f.n_points}};
}

json report_json(const BoundReport& r) {
  json p = json::object();
  for (const auto& [k, v] : r.parameters) p[k] = v;
  return {{"bound", r.bound_name},
          {"parameters", p},
          {"violations", r.violations},
          {"worst_margin", r.worst_margin}};
}

FitWindow configured_window(const ExperimentConfig& cfg, const GapSeries& s) {
  FitWindow w = default_window(s);
  if (!cfg.get("fit.t_lo").empty()) w.t_lo = cfg.get_double("fit.t_lo");
  if (!cfg.get("fit.t_hi").empty()) w.t_hi = cfg.get_double("fit.t_hi");
  return w;
}

Context make_context(const ExperimentConfig& cfg) {
  CompositeProblem problem = build_problem(cfg);
  VolatilitySchedule vol = build_volatility(cfg, problem);
  const std::string drift = drift_kind(cfg, problem);
  Dynamics dyn = build_dynamics(cfg, problem);
  Vector x0 = build_x0(cfg, problem.f.dim);
  return {cfg, std::move(problem), std::move(vol), std::move(dyn), drift, std::move(x0)};
}

PathSetup make_setup(const Context& c) {
  const double T = positive_double(c.cfg, "sim.T");
  const int level = grid_level(c.cfg, "sim.level");
  const std::size_t stride = positive_count(c.cfg, "sim.stride");
  return {c.dyn, c.vol, c.x0, T, level, stride, c.cfg.get_u64("seed")};
}

std::string fmt(double v) { return format_number(v); }

// ---- studies --------------------------------------------------------------

StudyResult study_simulate(const ExperimentConfig& cfg, unsigned) {
  const Context c = make_context(cfg);
  const PathSetup setup = make_setup(c);
  const std::size_t n = cfg.has("sim.paths") ? positive_count(cfg, "sim.paths") : 1;
  StudyResult r;
  json finals = json::array();
  for (std::size_t p = 0; p < n; ++p) {
    Trajectory tr;
    try {
      tr = setup.run(p);
    } catch (const Error& e) {
      throw PathFailure(p, e.what());
    }
    std::ostringstream os;
    write_trajectory_csv(tr, os);
    r.artifacts.push_back({"trajectory_" + std::to_string(p) + ".csv", os.str()});
    finals.push_back({{"path", p}, {"final_gap", tr.objective_gap.back()}});
  }
  r.summary["paths"] = finals;
  r.report = "simulated " + std::to_string(n) + " path(s) with drift '" + c.drift + "'\n";
  return r;
}

StudyResult study_estimate(const ExperimentConfig& cfg, unsigned workers) {
  const Context c = make_context(cfg);
  const PathSetup setup = make_setup(c);
  const std::size_t n = positive_count(cfg, "sim.paths", 2);
  const Quantity q = default_quantity(c);
  const std::optional<BoundSpec> bound = select_bound(c, q);
  const std::string fit_model = cfg.get("fit.model");
  if (fit_model != "none") as_config_error("fit.model", [&] { return parse_fit_model(fit_model); });
  const bool decay = cfg.get_bool("estimate.decay_check");

  const GapSeries s = estimate(setup, q, n, workers);
  StudyResult r;
  std::vector<double> bvals;
  std::ostringstream rep;
  rep << "quantity " << quantity_name(q) << ", " << n << " paths, final mean " << fmt(s.mean.back()) << " +- "
      << fmt(s.ci_halfwidth.back()) << "\n";
  r.summary["quantity"] = std::string(quantity_name(q));
  r.summary["n_paths"] = n;
  r.summary["final"] = {{"t", s.times.back()}, {"mean", s.mean.back()}, {"ci", s.ci_halfwidth.back()}};
  if (bound) {
    const BoundReport br = check_bound(s, bound->name, bound->params, bound->fn);
    bvals = br.values;
    r.summary["bound"] = report_json(br);
    r.summary["violations"] = br.violations;
    rep << "bound " << br.bound_name << ": " << br.violations << " violation(s)\n";
  }
  if (fit_model != "none") {
    const RateFit fit = fit_rate(s, parse_fit_model(fit_model), configured_window(cfg, s));
    r.summary["fit"] = fit_json(fit);
    rep << "fit " << fit_model << ": exponent " << fmt(fit.exponent) << " (r2 " << fmt(fit.r2) << ")\n";
  }
  if (decay) {
    const DecaySpotCheck d = decay_spot_check(setup, n, workers);
    r.summary["decay_check"] = {{"label", "statistical proxy"},
                                {"fraction", d.fraction},
                                {"n_decreased", d.n_decreased},
                                {"passed", d.passed}};
    rep << "decay proxy (statistical): " << fmt(d.fraction) << " of paths decreased\n";
  }
  r.artifacts.push_back({"series_" + std::string(quantity_name(q)) + ".csv", series_csv(s, bvals)});
  r.report = rep.str();
  return r;
}

StudyResult study_order(const ExperimentConfig& cfg, unsigned workers) {
  ExperimentConfig local = cfg;
  if (cfg.get("vol.kind") == "auto") local.set("vol.kind", "multiplicative");
  const Context c = make_context(local);
  StrongOrderConfig oc{c.dyn,
                       c.vol,
                       c.x0,
                       positive_double(cfg, "sim.T"),
                       cfg.get_ints("order.levels"),
                       grid_level(cfg, "order.ref_level"),
                       positive_count(cfg, "sim.paths", 2),
                       cfg.get_u64("seed"),
                       workers};
  for (int L : oc.levels)
    if (L < 0 || L > 24) throw ConfigError("order.levels", "levels must be in [0, 24]");
  as_config_error("order.levels", [&] {
    if (oc.levels.size() < 3) throw InvalidParameter("need at least 3 levels");
    if (oc.ref_level <= *std::max_element(oc.levels.begin(), oc.levels.end()))
      throw InvalidParameter("order.ref_level must exceed every coarse level");
    return 0;
  });
  const StrongOrderResult res = strong_order_study(oc);
  std::ostringstream csv, rep;
  csv << "level,h,state_ms,state_ms_ci,state_rms,objective_error,objective_error_ci\n";
  json rows = json::array();
  for (const auto& l : res.levels) {
    csv << l.level << ',' << fmt(l.h) << ',' << fmt(l.state_ms) << ',' << fmt(l.state_ms_ci) << ','
        << fmt(l.state_rms) << ',' << fmt(l.objective_error) << ',' << fmt(l.objective_error_ci) << '\n';
    rows.push_back({{"level", l.level}, {"h", l.h}, {"state_rms", l.state_rms}, {"objective_error", l.objective_error}});
  }
  StudyResult r;
  r.artifacts.push_back({"order.csv", csv.str()});
  const bool multiplicative = c.vol.kind == VolatilityKind::custom_multiplicative;
  r.summary["levels"] = rows;
  r.summary["ref_level"] = res.ref_level;
  r.summary["state_order"] = {{"slope", res.state_order.slope}, {"r2", res.state_order.r2}};
  r.summary["objective_order"] = {{"slope", res.objective_order.slope}, {"r2", res.objective_order.r2}};
  r.summary["objective_monotone"] = res.objective_monotone;
  r.summary["expected_state_order"] = multiplicative ? 0.5 : 1.0;
  rep << "state-error order " << fmt(res.state_order.slope) << " (expected " << (multiplicative ? "1/2" : "1")
      << "), objective error monotone: " << (res.objective_monotone ? "yes" : "no") << "\n";
  r.report = rep.str();
  return r;
}

StudyResult study_theta_sweep(const ExperimentConfig& cfg, unsigned workers) {
  const Context c = make_context(cfg);
  if (!c.problem.g.lipschitz_L0)
    throw ConfigError("problem.g", "theta-sweep needs a Lipschitz g (abs_l1), got '" + c.problem.g.name + "'");
  const std::vector<double> thetas = cfg.get_doubles("sweep.thetas");
  for (double th : thetas)
    if (!(th > 0.0)) throw ConfigError("sweep.thetas", "every theta must be > 0");
  if (thetas.empty()) throw ConfigError("sweep.thetas", "empty theta grid");
  ThetaSweepConfig tc{c.problem,
                      c.vol,
                      c.x0,
                      positive_double(cfg, "sim.T"),
                      grid_level(cfg, "sim.level"),
                      positive_count(cfg, "sim.stride"),
                      positive_count(cfg, "sim.paths", 2),
                      cfg.get_u64("seed"),
                      workers,
                      thetas,
                      positive_double(cfg, "sweep.epsilon")};
  const ThetaSweepResult res = theta_sweep(tc);
  StudyResult r;
  std::ostringstream table, rep;
  table << "theta,C0,final_gap,final_ci,final_bound,violations\n";
  json rows = json::array();
  std::size_t total = 0;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& row = res.rows[i];
    r.artifacts.push_back({"sweep_theta_" + std::to_string(i) + ".csv", series_csv(row.series, row.report.values)});
    table << fmt(row.theta) << ',' << fmt(row.C0) << ',' << fmt(row.series.mean.back()) << ','
          << fmt(row.series.ci_halfwidth.back()) << ',' << fmt(row.report.values.back()) << ','
          << row.report.violations << '\n';
    rows.push_back({{"theta", row.theta}, {"C0", row.C0}, {"final_gap", row.series.mean.back()},
                    {"final_bound", row.report.values.back()}, {"report", report_json(row.report)}});
    total += row.report.violations;
    rep << "theta " << fmt(row.theta) << ": final gap " << fmt(row.series.mean.back()) << " <= bound "
        << fmt(row.report.values.back()) << ", " << row.report.violations << " violation(s)\n";
  }
  r.artifacts.push_back({"sweep.csv", table.str()});
  r.summary["rows"] = rows;
  r.summary["violations"] = total;
  r.summary["L0"] = res.L0;
  r.summary["sigma_star_sq"] = res.sigma_star_sq;
  r.summary["schedule"] = {{"epsilon", tc.epsilon}, {"theta", res.schedule.theta}, {"t_min", res.schedule.t_min}};
  if (res.coercive_radius) r.summary["argmin_radius_C"] = res.coercive_radius->C;
  rep << "recommended theta for epsilon " << fmt(tc.epsilon) << ": " << fmt(res.schedule.theta) << "\n";
  r.report = rep.str();
  return r;
}

StudyResult study_coco(const ExperimentConfig& cfg, unsigned workers) {
  const Context c = make_context(cfg);
  CocoConfig cc{c.problem,
                c.vol,
                c.x0,
                positive_double(cfg, "sim.T"),
                grid_level(cfg, "sim.level"),
                positive_count(cfg, "sim.stride"),
                positive_count(cfg, "sim.paths", 2),
                cfg.get_u64("seed"),
                workers,
                cfg.get_doubles("coco.mus"),
                positive_count(cfg, "coco.samples"),
                5.0};
  const double L = c.problem.f.lipschitz_L;
  for (double mu : cc.mus)
    if (!(mu > 0.0) || (L > 0.0 && !(mu < 2.0 / L)))
      throw ConfigError("coco.mus", "every step must lie in (0, 2/L)");
  if (cc.mus.empty()) throw ConfigError("coco.mus", "empty step list");
  if (!c.problem.minimizer) throw ConfigError("problem", "composite minimizer not available in closed form");
  const std::vector<CocoRow> rows = coco_study(cc);
  StudyResult r;
  std::ostringstream table, rep;
  table << "mu,rho,pairs,pairs_passed,zero_residual,violations\n";
  json out = json::array();
  std::size_t total = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    r.artifacts.push_back({"coco_mu_" + std::to_string(i) + ".csv", series_csv(row.series, row.report.values)});
    table << fmt(row.mu) << ',' << fmt(row.rho) << ',' << row.cocoercivity.checked << ','
          << row.cocoercivity.passed << ',' << fmt(row.zero_residual) << ',' << row.report.violations << '\n';
    out.push_back({{"mu", row.mu}, {"rho", row.rho}, {"pairs", row.cocoercivity.checked},
                   {"pairs_passed", row.cocoercivity.passed}, {"worst_margin", row.cocoercivity.worst_margin},
                   {"zero_residual", row.zero_residual}, {"report", report_json(row.report)}});
    total += row.report.violations + (row.cocoercivity.checked - row.cocoercivity.passed);
    rep << "mu " << fmt(row.mu) << ": rho " << fmt(row.rho) << ", cocoercivity " << row.cocoercivity.passed << "/"
        << row.cocoercivity.checked << ", |M(x*)| " << fmt(row.zero_residual) << ", " << row.report.violations
        << " bound violation(s)\n";
  }
  r.artifacts.push_back({"coco.csv", table.str()});
  r.summary["rows"] = out;
  r.summary["violations"] = total;
  r.report = rep.str();
  return r;
}

StudyResult study_conjecture(const ExperimentConfig& cfg, unsigned workers) {
  const double rr = cfg.get_double("conj.r");
  if (!(rr >= 2.0)) throw ConfigError("conj.r", "must be >= 2");
  const std::size_t dim = positive_count(cfg, "problem.dim");
  ConjectureConfig cc{rr,
                      dim,
                      cfg.get_double("vol.sigma0"),
                      broadcast(cfg, "sim.x0", dim),
                      positive_double(cfg, "sim.T"),
                      grid_level(cfg, "sim.level"),
                      positive_count(cfg, "sim.stride"),
                      positive_count(cfg, "sim.paths", 2),
                      cfg.get_u64("seed"),
                      workers};
  const ConjectureResult res = as_config_error("conj", [&] { return conjecture_study(cc); });
  StudyResult r;
  r.artifacts.push_back({"conjecture.csv", series_csv(res.series, {})});
  r.summary["label"] = "EXPLORATORY";
  r.summary["q"] = res.q;
  r.summary["b"] = res.b;
  r.summary["alpha"] = res.alpha;
  r.summary["branch"] = res.exponential_branch ? "exponential" : "power";
  r.summary["fit"] = fit_json(res.fit);
  r.summary["conjectured_exponent"] = res.conjectured_exponent;
  r.summary["distance"] = res.distance;
  std::ostringstream rep;
  rep << "EXPLORATORY: fitted " << (res.exponential_branch ? "rate " : "exponent ") << fmt(res.fit.exponent)
      << ", conjectured " << fmt(res.conjectured_exponent) << ", distance " << fmt(res.distance) << "\n";
  r.report = rep.str();
  return r;
}

StudyResult study_check(const ExperimentConfig& cfg, unsigned) {
  const Context c = make_context(cfg);
  const std::size_t samples = positive_count(cfg, "check.samples");
  const std::vector<CheckRow> rows = run_check_suite(c.problem, c.vol, samples, cfg.get_u64("seed"));
  StudyResult r;
  std::ostringstream csv, rep;
  csv << "suite,name,checked,passed,skipped,worst_margin,status\n";
  json out = json::array();
  std::size_t failed = 0;
  for (const auto& row : rows) {
    const auto& b = row.report;
    const std::string status = b.checked == 0 ? "SKIP" : (b.ok() ? "PASS" : "FAIL");
    if (status == "FAIL") ++failed;
    csv << row.suite << ',' << b.name << ',' << b.checked << ',' << b.passed << ',' << b.skipped << ','
        << fmt(b.worst_margin) << ',' << status << '\n';
    out.push_back({{"suite", row.suite}, {"name", b.name}, {"checked", b.checked}, {"passed", b.passed},
                   {"skipped", b.skipped}, {"status", status}});
    rep << status << "  " << row.suite << "  " << b.name << "  " << b.passed << "/" << b.checked << "\n";
  }
  r.artifacts.push_back({"checks.csv", csv.str()});
  r.summary["checks"] = out;
  r.summary["failed"] = failed;
  r.report = rep.str();
  return r;
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidProblem*>(&e) ||
      dynamic_cast<const InvalidParameter*>(&e) || dynamic_cast<const Unsupported*>(&e))
    return kExitValidation;
  if (dynamic_cast<const NumericFailure*>(&e) || dynamic_cast<const PathFailure*>(&e) ||
      dynamic_cast<const FitError*>(&e) || dynamic_cast<const RangeError*>(&e))
    return kExitNumeric;
  return kExitFailure;
}

const std::vector<std::string_view>& study_names() {
  static const std::vector<std::string_view> names = {"simulate", "estimate", "order", "theta-sweep",
                                                      "coco",     "conjecture", "check"};
  return names;
}

CompositeProblem build_problem(const ExperimentConfig& cfg) {
  const std::size_t dim = positive_count(cfg, "problem.dim");
  const std::string name = cfg.get("problem.name");
  SmoothPotential f = as_config_error("problem.name", [&]() -> SmoothPotential {
    if (name == "quadratic")
      return make_quadratic(dim, broadcast(cfg, "problem.eigenvalues", dim), broadcast(cfg, "problem.center", dim));
    if (name == "power_norm") return make_power_norm(dim, cfg.get_double("problem.r"), cfg.get_double("problem.radius"));
    throw ConfigError("problem.name", "unknown problem '" + name + "' (valid: quadratic, power_norm)");
  });
  const std::string gname = cfg.get("problem.g");
  NonsmoothTerm g = as_config_error("problem.g", [&]() -> NonsmoothTerm {
    if (gname == "none") return make_zero_term(dim);
    if (gname == "abs_l1") return make_abs_l1(dim, cfg.get_double("problem.g_weight"));
    if (gname == "indicator_box")
      return make_indicator_box(broadcast(cfg, "problem.g_lo", dim), broadcast(cfg, "problem.g_hi", dim));
    if (gname == "quadratic_term") return make_quadratic_term(dim, cfg.get_double("problem.g_c"));
    throw ConfigError("problem.g", "unknown term '" + gname + "' (valid: none, abs_l1, indicator_box, quadratic_term)");
  });
  return make_composite(std::move(f), std::move(g));
}

VolatilitySchedule build_volatility(const ExperimentConfig& cfg, const CompositeProblem& problem) {
  const std::size_t dim = problem.f.dim;
  const double sigma0 = cfg.get_double("vol.sigma0");
  const double alpha = cfg.get_double("vol.alpha");
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) throw ConfigError("vol.sigma0", "must be >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("vol.alpha", "must be >= 0");
  const long long m = cfg.get_int("vol.m");
  if (m < 0) throw ConfigError("vol.m", "must be >= 0");
  std::string kind = cfg.get("vol.kind");
  if (kind == "auto") kind = alpha > 0.0 ? "decreasing" : "constant";
  return as_config_error("vol", [&]() -> VolatilitySchedule {
    if (kind == "constant") {
      if (alpha != 0.0) throw ConfigError("vol.alpha", "constant volatility needs alpha = 0");
      return constant_volatility(dim, sigma0, static_cast<std::size_t>(m));
    }
    if (kind == "decreasing") return decreasing_volatility(dim, sigma0, alpha, static_cast<std::size_t>(m));
    if (kind == "multiplicative") {
      Vector anchor;
      if (!cfg.get("vol.anchor").empty()) {
        anchor = broadcast(cfg, "vol.anchor", dim);
      } else if (problem.minimizer) {
        anchor = *problem.minimizer;
      } else {
        anchor = problem.f.minimizer.value_or(Vector(dim, 0.0));
      }
      return multiplicative_volatility(dim, sigma0, alpha, anchor, static_cast<std::size_t>(m));
    }
    throw ConfigError("vol.kind", "unknown kind '" + kind + "' (valid: auto, constant, decreasing, multiplicative)");
  });
}

Dynamics build_dynamics(const ExperimentConfig& cfg, const CompositeProblem& problem) {
  const std::string d = drift_kind(cfg, problem);
  if (d == "gradient") {
    if (problem.g.kind != TermKind::zero) throw ConfigError("problem.drift", "gradient drift ignores g; use problem.g = none");
    return gradient_dynamics(problem.f);
  }
  if (d == "smoothed")
    return as_config_error("problem.theta", [&] { return smoothed_dynamics(problem, cfg.get_double("problem.theta")); });
  return as_config_error("problem.mu", [&] {
    if (!problem.min_value) throw Unsupported("operator drift needs the composite minimum in closed form");
    return operator_dynamics(make_forward_backward_operator(problem, cfg.get_double("problem.mu")), problem);
  });
}

Vector build_x0(const ExperimentConfig& cfg, std::size_t dim) { return broadcast(cfg, "sim.x0", dim); }

std::string series_csv(const GapSeries& s, const std::vector<double>& bound) {
  std::string out = "t,mean,ci,bound\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out += fmt(s.times[i]);
    out += ',';
    out += fmt(s.mean[i]);
    out += ',';
    out += fmt(s.ci_halfwidth[i]);
    out += ',';
    if (i < bound.size()) out += fmt(bound[i]);
    out += '\n';
  }
  return out;
}

StudyResult run_study(const ExperimentConfig& cfg, unsigned workers) {
  const std::string study = cfg.get("study");
  using Fn = StudyResult (*)(const ExperimentConfig&, unsigned);
  static const std::map<std::string, Fn, std::less<>> table = {
      {"simulate", study_simulate}, {"estimate", study_estimate},     {"order", study_order},
      {"theta-sweep", study_theta_sweep}, {"coco", study_coco}, {"conjecture", study_conjecture},
      {"check", study_check}};
  const auto it = table.find(study);
  if (it == table.end()) {
    std::string valid;
    for (auto n : study_names()) valid += (valid.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("study", "unknown study '" + study + "' (valid: " + valid + ")");
  }
  cfg.get_u64("seed");
  StudyResult r = it->second(cfg, workers);
  r.study = study;
  r.summary["study"] = study;
  r.summary["seed"] = cfg.get_u64("seed");
  r.summary["config"] = config_echo(cfg);
  r.summary["version"] = kVersion;
  return r;
}

int run_and_write(const ExperimentConfig& cfg, unsigned workers, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    StudyResult r = run_study(cfg, workers);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.summary["runtime_seconds"] = secs;
    std::vector<Artifact> files = r.artifacts;
    files.push_back({"summary.json", r.summary.dump(2) + "\n"});
    json manifest = {{"version", kVersion},
                     {"study", r.study},
                     {"seed", cfg.get_u64("seed")},
                     {"config", cfg.serialize()},
                     {"wall_clock_seconds", secs}};
    write_artifacts(cfg.get("out"), files, manifest);
    out << r.report;
    out << "wrote " << files.size() + 1 << " file(s) to " << cfg.get("out") << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << (code == kExitValidation ? "validation error: " : code == kExitNumeric ? "numeric failure: " : "error: ")
        << e.what() << "\n";
    return code;
  }
}

}  // namespace sgflab::cli
