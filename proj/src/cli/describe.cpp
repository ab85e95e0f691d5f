#include "sgflab/cli/describe.hpp"

#include <sstream>

#include "sgflab/cli/config.hpp"
#include "sgflab/errors.hpp"

namespace sgflab::cli {

namespace {

struct Entry {
  std::string_view name;
  std::string_view kind;
  std::string_view text;
  std::vector<std::string_view> keys;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {"simulate", "study",
       "Euler-Maruyama paths of dX = -drift(X) dt + sigma(t,X) dW with the left-endpoint scheme.\n"
       "Writes trajectory_<i>.csv with columns t,x_0..x_{d-1},favg,gap for each path.\n",
       {"problem.name", "problem.drift", "vol.kind", "vol.sigma0", "vol.alpha", "sim.x0", "sim.T", "sim.level",
        "sim.stride", "sim.paths"}},
      {"estimate", "study",
       "Monte-Carlo mean of a quantity with 95% normal CIs, compared with a closed-form bound.\n"
       "Bounds checked against mean - ci:\n"
       "  ergodic_convex         E[f(Xbar(t)) - min f] <= dist(X0,S)^2/(2t) + sigma*^2/2\n"
       "  strongly_convex        E|X(t)-x*|^2 <= |X0-x*|^2 e^{-2 mu t} + sigma*^2/(2 mu)\n"
       "  strongly_convex_split  |X0-x*|^2 e^{-2 mu t} + sigma*^2/(2 mu) e^{-2 mu (1-lambda) t} + sigma_inf^2(lambda t)\n"
       "  pointwise_beta         E[f(X(t)) - min f] <= dist^2/(2t) + (K max(1,L)/2) t^{beta-1}\n"
       "  ergodic_distance_eb    dist(E Xbar(t), S) <= (dist^2/(2 gamma))^{1/p} t^{-1/p} + (sigma*^2/(2 gamma))^{1/p}\n"
       "  cocoercive_ergodic     E[avg |M(X)|^2](t) <= dist(X0,M^-1(0))^2/(2 rho t) + sigma*^2/(2 rho)\n"
       "  cocoercive_strong      E|X(t)-x*|^2/2 <= |X0-x*|^2/2 e^{-2 gamma t} + sigma*^2/(4 gamma)\n"
       "  moreau_composite       E[F(Xbar_theta(t)) - min F] <= C0^2/(2t) + sigma*^2/2 + theta L0^2/2\n"
       "Optional rate fit (power or exponential) on a log scale; the default window skips the first 10% of T.\n",
       {"estimate.quantity", "estimate.bound", "estimate.decay_check", "bound.lambda", "fit.model", "fit.t_lo",
        "fit.t_hi", "sim.paths"}},
      {"order", "study",
       "Strong-error study: each coarse level is driven by the reference Brownian path coarsened exactly.\n"
       "Reports sqrt(E sup_k |X_L(t_k) - X_ref(t_k)|^2) and E|f(Xbar_L(T)) - f(Xbar_ref(T))| per level.\n"
       "Expected slopes against h: 1/2 with multiplicative noise (the default here, clip_norm factor),\n"
       "1 with additive noise (Euler-Maruyama is order 1 when sigma does not depend on x).\n",
       {"order.levels", "order.ref_level", "vol.kind", "sim.T", "sim.paths"}},
      {"theta-sweep", "study",
       "Smoothed composite drift grad(f + g_theta) for each theta; the gap is measured on the true F = f + g at "
       "the ergodic average.\n"
       "Bound: E[F(Xbar_theta(t)) - min F] <= C0^2/(2t) + sigma*^2/2 + theta L0^2/2, with C0 = dist(X0, argmin "
       "F_theta).\n"
       "Also reports the recommended theta = min(sigma*^2, eps)/L0^2 and t_min = C0^2/(2 eps).\n",
       {"problem.g", "sweep.thetas", "sweep.epsilon", "sim.T", "sim.level", "sim.paths"}},
      {"coco", "study",
       "Forward-backward operator M(x) = (x - prox_{mu g}(x - mu grad f(x)))/mu for each step mu in (0, 2/L).\n"
       "Checks <Mx-My, x-y> >= rho |Mx-My|^2 with rho = mu(1 - mu/(4 lambda)), lambda = 1/L, on random pairs,\n"
       "|M(x*)| <= 1e-9, and E[avg |M(X)|^2](t) <= dist^2/(2 rho t) + sigma*^2/(2 rho).\n",
       {"coco.mus", "coco.samples", "problem.g", "sim.T", "sim.paths"}},
      {"conjecture", "study",
       "EXPLORATORY. f = |x|^r, q = 1 - 1/r, b = 2q, sigma_inf(t) = sigma0 (1+t)^{-b/(2(b-1))}.\n"
       "Fits the decay exponent of E[f(X(t)) - min f] and reports its distance to -1/(2q-1) (-2 for r = 4).\n"
       "r = 2 switches to an exponential fit compared with mu^2.\n",
       {"conj.r", "vol.sigma0", "sim.x0", "sim.T", "sim.level", "sim.paths"}},
      {"check", "study",
       "Sampled invariant suites: finite-difference gradients, Lipschitz and strong-convexity inequalities, "
       "|grad f|^2 <= 2L(f - min f),\n"
       "Lojasiewicz and error-bound data, prox optimality, envelope sandwich g_theta <= g <= g_theta + theta "
       "D^2/2,\n"
       "envelope gradient identity and monotonicity in theta, forward-backward cocoercivity, noise envelopes.\n"
       "Prints one PASS/FAIL/SKIP line per invariant.\n",
       {"check.samples", "problem.name", "problem.g", "vol.kind"}},
      {"quadratic", "problem",
       "f(x) = 1/2 sum_i lambda_i (x_i - c_i)^2.\n"
       "L = max lambda, mu = min lambda, min f = 0, argmin = {c}.\n"
       "Lojasiewicz q = 1/2 with constant sqrt(2 min lambda); error bound p = 2 with gamma = min lambda / 2.\n",
       {"problem.dim", "problem.eigenvalues", "problem.center"}},
      {"power_norm", "problem",
       "f(x) = |x|^r, r >= 2. min f = 0 at 0.\n"
       "Lojasiewicz q = 1 - 1/r with constant r; error bound p = r with gamma = 1.\n"
       "L = r(r-1) R^{r-2} is local to the ball of radius R; mu = 2 only for r = 2.\n",
       {"problem.dim", "problem.r", "problem.radius"}},
      {"abs_l1", "term",
       "g(x) = w sum_i |x_i|. prox is soft-thresholding at w theta. L0 = D = w sqrt(d).\n",
       {"problem.g_weight"}},
      {"indicator_box", "term",
       "g = 0 on [lo, hi], +inf outside. prox is the clamp. No finite L0 or D, so Moreau-gap bounds reject it.\n",
       {"problem.g_lo", "problem.g_hi"}},
      {"quadratic_term", "term",
       "g(x) = (c/2)|x|^2. prox(x) = x/(1 + theta c); the envelope is c/(1 + theta c)-strongly convex.\n",
       {"problem.g_c"}},
  };
  return e;
}

}  // namespace

std::vector<std::string_view> describable_names() {
  std::vector<std::string_view> names;
  for (const auto& e : entries()) names.push_back(e.name);
  return names;
}

std::string describe(std::string_view name) {
  for (const auto& e : entries()) {
    if (e.name != name) continue;
    std::ostringstream os;
    os << e.name << " (" << e.kind << ")\n\n" << e.text << "\nParameters:\n";
    for (auto k : e.keys) {
      const KeySpec* spec = find_key(k);
      os << "  " << k << " = " << (spec && !spec->default_value.empty() ? spec->default_value : "(unset)");
      if (spec) os << "    # " << spec->help;
      os << "\n";
    }
    return os.str();
  }
  std::string valid;
  for (auto n : describable_names()) valid += (valid.empty() ? "" : ", ") + std::string(n);
  throw ConfigError("", "unknown name '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace sgflab::cli
