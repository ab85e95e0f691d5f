#include "sgflab/studies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgflab/errors.hpp"
#include "sgflab/parallel.hpp"

namespace sgflab {

namespace {

std::size_t block_count(std::size_t n) { return (n + kPathBlock - 1) / kPathBlock; }

}  // namespace

StrongOrderResult strong_order_study(const StrongOrderConfig& cfg) {
  if (cfg.levels.size() < 3) throw InvalidParameter("strong_order_study: need at least 3 levels");
  if (!std::is_sorted(cfg.levels.begin(), cfg.levels.end()) ||
      std::adjacent_find(cfg.levels.begin(), cfg.levels.end()) != cfg.levels.end())
    throw InvalidParameter("strong_order_study: levels must be strictly increasing");
  if (cfg.levels.front() < 0) throw InvalidParameter("strong_order_study: levels must be >= 0");
  if (cfg.ref_level <= cfg.levels.back())
    throw InvalidParameter("strong_order_study: ref_level must exceed the finest coarse level");
  if (cfg.n_paths < 2) throw InvalidParameter("strong_order_study: n_paths must be >= 2");

  const std::size_t nl = cfg.levels.size();
  const std::size_t n_blocks = block_count(cfg.n_paths);
  struct Acc {
    std::vector<MomentAccumulator> state, obj;
  };
  std::vector<Acc> blocks(n_blocks);

  parallel_for_blocks(n_blocks, cfg.workers, [&](std::size_t b) {
    Acc acc{std::vector<MomentAccumulator>(nl), std::vector<MomentAccumulator>(nl)};
    const std::size_t first = b * kPathBlock;
    const std::size_t last = std::min(cfg.n_paths, first + kPathBlock);
    for (std::size_t p = first; p < last; ++p) {
      try {
        const BrownianPath ref = sample_brownian(cfg.seed, p, cfg.T, cfg.ref_level, cfg.volatility.m);
        const Trajectory tr_ref = simulate(cfg.dynamics, cfg.volatility, cfg.x0, cfg.T, cfg.ref_level, ref, 1);
        const double f_ref = cfg.dynamics.objective(tr_ref.running_average.back());
        for (std::size_t i = 0; i < nl; ++i) {
          const int L = cfg.levels[i];
          const Trajectory tr = simulate(cfg.dynamics, cfg.volatility, cfg.x0, cfg.T, L, ref.at_level(L), 1);
          const std::size_t ratio = std::size_t{1} << (cfg.ref_level - L);
          double sup = 0.0;
          for (std::size_t k = 0; k < tr.size(); ++k)
            sup = std::max(sup, squared_distance(tr.states[k], tr_ref.states[k * ratio]));
          acc.state[i].add(sup);
          acc.obj[i].add(std::abs(cfg.dynamics.objective(tr.running_average.back()) - f_ref));
        }
      } catch (const Error& e) {
        throw PathFailure(p, e.what());
      }
    }
    blocks[b] = std::move(acc);
  });

  std::vector<MomentAccumulator> state(nl), obj(nl);
  for (const auto& blk : blocks)
    for (std::size_t i = 0; i < nl; ++i) {
      state[i].merge(blk.state[i]);
      obj[i].merge(blk.obj[i]);
    }

  StrongOrderResult r;
  r.ref_level = cfg.ref_level;
  r.n_paths = cfg.n_paths;
  std::vector<double> lh, ls, lo;
  bool obj_positive = true;
  for (std::size_t i = 0; i < nl; ++i) {
    StrongOrderLevel row;
    row.level = cfg.levels[i];
    row.h = cfg.T / static_cast<double>(std::size_t{1} << row.level);
    row.state_ms = state[i].mean;
    row.state_ms_ci = state[i].ci95();
    row.state_rms = std::sqrt(row.state_ms);
    row.objective_error = obj[i].mean;
    row.objective_error_ci = obj[i].ci95();
    r.levels.push_back(row);
    lh.push_back(std::log(row.h));
    ls.push_back(std::log(row.state_rms));
    lo.push_back(std::log(row.objective_error));
    obj_positive = obj_positive && row.objective_error > 0.0;
  }
  if (!(r.levels.front().state_rms > 0.0)) throw FitError("strong_order_study: zero state error at every level");
  r.state_order = least_squares(lh, ls);
  if (obj_positive) r.objective_order = least_squares(lh, lo);
  r.objective_monotone = true;
  for (std::size_t i = 1; i < nl; ++i)
    if (!(r.levels[i].objective_error < r.levels[i - 1].objective_error)) r.objective_monotone = false;
  return r;
}

ThetaSweepResult theta_sweep(const ThetaSweepConfig& cfg) {
  const NonsmoothTerm& g = cfg.problem.g;
  if (!g.lipschitz_L0) throw Unsupported("theta_sweep: g = '" + g.name + "' has no finite Lipschitz constant");
  if (cfg.thetas.empty()) throw InvalidParameter("theta_sweep: empty theta grid");
  if (!cfg.problem.min_value) throw Unsupported("theta_sweep: min F not available in closed form");
  ThetaSweepResult res;
  res.L0 = *g.lipschitz_L0;
  res.sigma_star_sq = cfg.volatility.sigma_star_sq();

  const double theta_bar = *std::max_element(cfg.thetas.begin(), cfg.thetas.end());
  if (g.kind == TermKind::weighted_l1 && g.weight > 0.0 && cfg.problem.f.min_value >= 0.0) {
    // F ≥ w‖x‖₁ + min f ≥ w‖x‖ + min f
    res.coercive_radius = sup_argmin_bound({g.weight, cfg.problem.f.min_value, *cfg.problem.min_value, res.L0,
                                            theta_bar});
  }

  for (double theta : cfg.thetas) {
    PathSetup setup{smoothed_dynamics(cfg.problem, theta), cfg.volatility, cfg.x0, cfg.T, cfg.level, cfg.stride,
                    cfg.seed};
    ThetaSweepRow row;
    row.theta = theta;
    row.C0 = setup.dynamics.dist_to_solution(cfg.x0);
    row.series = estimate(setup, Quantity::ergodic_objective_gap, cfg.n_paths, cfg.workers);
    const double c0sq = row.C0 * row.C0, s2 = res.sigma_star_sq, L0 = res.L0;
    row.report = check_bound(row.series, "moreau_composite_ergodic",
                             {{"C0", row.C0}, {"sigma_star_sq", s2}, {"theta", theta}, {"L0", L0}},
                             [=](double t) {
                               return bound_moreau(MoreauVariant::nuevo1_1,
                                                   {c0sq, s2, theta, L0, 0.0, 0.0, 0.0, t});
                             });
    res.rows.push_back(std::move(row));
  }
  const double dist0 = res.rows.front().C0;
  res.schedule = theta_schedule(res.sigma_star_sq, cfg.epsilon, res.L0, ScheduleRegime::convex, dist0);
  return res;
}

std::vector<CocoRow> coco_study(const CocoConfig& cfg) {
  if (cfg.mus.empty()) throw InvalidParameter("coco_study: empty step-size list");
  if (!cfg.problem.minimizer) throw Unsupported("coco_study: composite minimizer not available in closed form");
  std::vector<CocoRow> rows;
  const double s2 = cfg.volatility.sigma_star_sq();
  for (double mu : cfg.mus) {
    const CocoerciveOperator op = make_forward_backward_operator(cfg.problem, mu);
    CocoRow row;
    row.mu = mu;
    row.rho = op.rho;
    row.cocoercivity = check_cocoercivity(op, *cfg.problem.minimizer, cfg.check_radius, cfg.samples, 1e-12,
                                          cfg.seed);
    row.zero_residual = norm(op.apply(*cfg.problem.minimizer));
    PathSetup setup{operator_dynamics(op, cfg.problem), cfg.volatility, cfg.x0, cfg.T, cfg.level, cfg.stride,
                    cfg.seed};
    const double d0 = setup.dynamics.dist_to_solution(cfg.x0);
    row.dist0_sq = d0 * d0;
    row.series = estimate(setup, Quantity::ergodic_operator_norm_sq, cfg.n_paths, cfg.workers);
    const double rho = op.rho, dsq = row.dist0_sq;
    row.report = check_bound(row.series, "cocoercive_ergodic", {{"dist0_sq", dsq}, {"rho", rho}, {"sigma_star_sq", s2}},
                             [=](double t) { return bound_cocoercive(dsq, rho, s2, t, true); });
    rows.push_back(std::move(row));
  }
  return rows;
}

ConjectureResult conjecture_study(const ConjectureConfig& cfg) {
  if (!(cfg.r >= 2.0)) throw InvalidParameter("conjecture_study: r must be >= 2");
  ConjectureResult res;
  res.q = 1.0 - 1.0 / cfg.r;
  res.b = 2.0 * res.q;
  res.exponential_branch = cfg.r == 2.0;
  res.alpha = res.exponential_branch ? 1.0 : res.b / (2.0 * (res.b - 1.0));
  Vector x0 = cfg.x0;
  if (x0.empty()) x0.assign(cfg.dim, 0.0), x0[0] = 0.9;
  const double radius = std::max(1.0, norm(x0));
  const SmoothPotential f = make_power_norm(cfg.dim, cfg.r, radius);
  PathSetup setup{gradient_dynamics(f), decreasing_volatility(cfg.dim, cfg.sigma0, res.alpha), x0, cfg.T, cfg.level,
                  cfg.stride, cfg.seed};
  res.series = estimate(setup, Quantity::objective_gap, cfg.n_paths, cfg.workers);
  if (res.exponential_branch) {
    res.fit = fit_rate(res.series, FitModel::exponential, {0.1 * cfg.T / 10.0, cfg.T / 10.0});
    const double mu = f.loja_mu.value_or(2.0);
    res.conjectured_exponent = mu * mu;
  } else {
    res.fit = fit_rate(res.series, FitModel::power, default_window(res.series));
    res.conjectured_exponent = -1.0 / (2.0 * res.q - 1.0);
  }
  res.distance = std::abs(res.fit.exponent - res.conjectured_exponent);
  return res;
}

DecaySpotCheck decay_spot_check(const PathSetup& setup, std::size_t n_paths, unsigned workers) {
  if (n_paths < 1) throw InvalidParameter("decay_spot_check: n_paths must be >= 1");
  const std::size_t n_blocks = block_count(n_paths);
  std::vector<std::size_t> decreased(n_blocks, 0);
  parallel_for_blocks(n_blocks, workers, [&](std::size_t b) {
    const std::size_t first = b * kPathBlock;
    const std::size_t last = std::min(n_paths, first + kPathBlock);
    for (std::size_t p = first; p < last; ++p) {
      Trajectory tr;
      try {
        tr = setup.run(p);
      } catch (const Error& e) {
        throw PathFailure(p, e.what());
      }
      const double T = tr.times.back();
      double early = 0.0, late = 0.0;
      std::size_t ne = 0, nlate = 0;
      for (std::size_t k = 0; k < tr.size(); ++k) {
        const double t = tr.times[k];
        if (t <= 0.25 * T) {
          early += t * tr.objective_gap[k];
          ++ne;
        } else if (t >= 0.75 * T) {
          late += t * tr.objective_gap[k];
          ++nlate;
        }
      }
      if (ne > 0 && nlate > 0 && late / static_cast<double>(nlate) < early / static_cast<double>(ne)) ++decreased[b];
    }
  });
  DecaySpotCheck r;
  r.n_paths = n_paths;
  for (std::size_t d : decreased) r.n_decreased += d;
  r.fraction = static_cast<double>(r.n_decreased) / static_cast<double>(n_paths);
  r.passed = r.fraction >= 0.9;
  return r;
}

}  // namespace sgflab
