#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sgflab/bounds.hpp"
#include "sgflab/checks.hpp"
#include "sgflab/cli/config.hpp"
#include "sgflab/cli/describe.hpp"
#include "sgflab/cli/runner.hpp"
#include "sgflab/errors.hpp"
#include "sgflab/estimate.hpp"
#include "sgflab/fit.hpp"
#include "sgflab/operators.hpp"
#include "sgflab/smoothing.hpp"
#include "sgflab/version.hpp"

namespace py = pybind11;
using namespace sgflab;

namespace {

VolatilitySchedule volatility_for(const std::string& kind, std::size_t dim, double sigma0, double alpha,
                                  const Vector& anchor) {
  if (kind == "constant") return constant_volatility(dim, sigma0);
  if (kind == "decreasing") return decreasing_volatility(dim, sigma0, alpha);
  if (kind == "multiplicative") return multiplicative_volatility(dim, sigma0, alpha, anchor);
  throw InvalidParameter("unknown volatility kind '" + kind + "' (valid: constant, decreasing, multiplicative)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic gradient-flow simulation and bound checking";
  m.attr("__version__") = std::string(kVersion);

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidProblem>(m, "InvalidProblem", base.ptr());
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
  py::register_exception<NumericFailure>(m, "NumericFailure", base.ptr());
  py::register_exception<PathFailure>(m, "PathFailure", base.ptr());
  py::register_exception<FitError>(m, "FitError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<SmoothPotential>(m, "SmoothPotential")
      .def_readonly("name", &SmoothPotential::name)
      .def_readonly("dim", &SmoothPotential::dim)
      .def_readonly("lipschitz_L", &SmoothPotential::lipschitz_L)
      .def_readonly("strong_mu", &SmoothPotential::strong_mu)
      .def_readonly("min_value", &SmoothPotential::min_value)
      .def_readonly("minimizer", &SmoothPotential::minimizer)
      .def_readonly("loja_q", &SmoothPotential::loja_q)
      .def_readonly("loja_mu", &SmoothPotential::loja_mu)
      .def_readonly("eb_exponent_p", &SmoothPotential::eb_exponent_p)
      .def_readonly("eb_gamma", &SmoothPotential::eb_gamma)
      .def("value", [](const SmoothPotential& f, const Vector& x) { return f.value(x); })
      .def("gradient", [](const SmoothPotential& f, const Vector& x) { return f.gradient(x); })
      .def("dist_to_argmin", [](const SmoothPotential& f, const Vector& x) { return f.dist_to_argmin(x); });

  py::class_<NonsmoothTerm>(m, "NonsmoothTerm")
      .def_readonly("name", &NonsmoothTerm::name)
      .def_readonly("dim", &NonsmoothTerm::dim)
      .def_readonly("lipschitz_L0", &NonsmoothTerm::lipschitz_L0)
      .def_readonly("subgrad_bound_D", &NonsmoothTerm::subgrad_bound_D)
      .def_readonly("strong_c", &NonsmoothTerm::strong_c)
      .def("value", [](const NonsmoothTerm& g, const Vector& x) { return g.value(x); })
      .def("prox", [](const NonsmoothTerm& g, const Vector& x, double theta) { return g.prox(x, theta); },
           py::arg("x"), py::arg("theta"));

  py::class_<CompositeProblem>(m, "CompositeProblem")
      .def_readonly("f", &CompositeProblem::f)
      .def_readonly("g", &CompositeProblem::g)
      .def_readonly("minimizer", &CompositeProblem::minimizer)
      .def_readonly("min_value", &CompositeProblem::min_value)
      .def("value", [](const CompositeProblem& p, const Vector& x) { return p.value(x); });

  m.def("make_quadratic", &make_quadratic, py::arg("dim"), py::arg("eigenvalues"), py::arg("center"));
  m.def("make_power_norm", &make_power_norm, py::arg("dim"), py::arg("r"), py::arg("radius") = 1.0);
  m.def("make_abs_l1", &make_abs_l1, py::arg("dim"), py::arg("weight") = 1.0);
  m.def("make_indicator_box", &make_indicator_box, py::arg("lo"), py::arg("hi"));
  m.def("make_quadratic_term", &make_quadratic_term, py::arg("dim"), py::arg("c"));
  m.def("make_zero_term", &make_zero_term, py::arg("dim"));
  m.def("make_composite", &make_composite, py::arg("f"), py::arg("g"));

  m.def("envelope_value",
        [](const NonsmoothTerm& g, double theta, const Vector& x) { return envelope_value(MoreauEnvelope(g, theta), x); },
        py::arg("g"), py::arg("theta"), py::arg("x"));
  m.def("envelope_gradient",
        [](const NonsmoothTerm& g, double theta, const Vector& x) {
          return envelope_gradient(MoreauEnvelope(g, theta), x);
        },
        py::arg("g"), py::arg("theta"), py::arg("x"));
  m.def("envelope_strong_convexity", &envelope_strong_convexity, py::arg("c"), py::arg("theta"));
  m.def("envelope_gap_bound", &envelope_gap_bound, py::arg("g"), py::arg("theta"));
  m.def("minimizer_drift_bound", &minimizer_drift_bound, py::arg("mu"), py::arg("L0"), py::arg("theta"));

  m.def("resolvent", &resolvent, py::arg("g"), py::arg("mu"), py::arg("x"));
  m.def("forward_backward", &forward_backward, py::arg("f"), py::arg("g"), py::arg("mu"), py::arg("x"));
  m.def("cocoercivity_constant", &cocoercivity_constant, py::arg("lam"), py::arg("mu"));
  m.def(
      "check_cocoercivity",
      [](const CompositeProblem& p, double mu, const Vector& center, double radius, std::size_t pairs,
         std::uint64_t seed) {
        const auto r = check_cocoercivity(make_forward_backward_operator(p, mu), center, radius, pairs, 1e-12, seed);
        return py::dict(py::arg("checked") = r.checked, py::arg("passed") = r.passed,
                        py::arg("worst_margin") = r.worst_margin);
      },
      py::arg("problem"), py::arg("mu"), py::arg("center"), py::arg("radius") = 5.0, py::arg("pairs") = 10000,
      py::arg("seed") = kDefaultSeed);

  m.def("bound_ergodic_convex", &bound_ergodic_convex, py::arg("dist0_sq"), py::arg("sigma_star_sq"), py::arg("t"));
  m.def(
      "bound_strongly_convex",
      [](double dsq, double mu, double s2, double t, std::optional<double> lambda,
         std::optional<std::function<double(double)>> sigma_inf) {
        std::optional<NoiseSplit> split;
        if (lambda) split = NoiseSplit{*lambda, sigma_inf.value_or(nullptr)};
        return bound_strongly_convex(dsq, mu, s2, t, split);
      },
      py::arg("dist0_sq"), py::arg("mu"), py::arg("sigma_star_sq"), py::arg("t"), py::arg("split_lambda") = py::none(),
      py::arg("sigma_inf") = py::none());
  m.def("bound_cocoercive", &bound_cocoercive, py::arg("dist0_sq"), py::arg("rho"), py::arg("sigma_star_sq"),
        py::arg("t"), py::arg("ergodic") = true, py::arg("gamma_strong") = py::none());

  m.def(
      "estimate",
      [](const SmoothPotential& f, const Vector& x0, double sigma0, double alpha, const std::string& vol_kind,
         double T, int level, std::size_t stride, std::size_t n_paths, const std::string& quantity,
         std::uint64_t seed, unsigned workers) {
        const Vector anchor = f.minimizer.value_or(Vector(f.dim, 0.0));
        PathSetup setup{gradient_dynamics(f), volatility_for(vol_kind, f.dim, sigma0, alpha, anchor), x0, T, level,
                        stride, seed};
        GapSeries s;
        {
          py::gil_scoped_release release;
          s = estimate(setup, parse_quantity(quantity), n_paths, workers);
        }
        return py::dict(py::arg("t") = s.times, py::arg("mean") = s.mean, py::arg("ci") = s.ci_halfwidth,
                        py::arg("std") = s.sample_std, py::arg("n_paths") = s.n_paths);
      },
      py::arg("f"), py::arg("x0"), py::arg("sigma0"), py::arg("alpha") = 0.0, py::arg("vol_kind") = "constant",
      py::arg("T") = 1.0, py::arg("level") = 10, py::arg("stride") = 1, py::arg("n_paths") = 1000,
      py::arg("quantity") = "sq_distance", py::arg("seed") = kDefaultSeed, py::arg("workers") = 1);

  m.def(
      "fit_rate",
      [](const Vector& t, const Vector& y, const std::string& model, double t_lo, double t_hi) {
        const auto r = fit_rate(t, y, parse_fit_model(model), {t_lo, t_hi});
        return py::dict(py::arg("exponent") = r.exponent, py::arg("constant") = r.constant, py::arg("r2") = r.r2,
                        py::arg("n_points") = r.n_points);
      },
      py::arg("t"), py::arg("y"), py::arg("model"), py::arg("t_lo"), py::arg("t_hi"));

  m.def(
      "run_study",
      [](const std::string& config_text, unsigned workers) {
        const auto cfg = cli::ExperimentConfig::parse(config_text);
        cli::StudyResult r;
        {
          py::gil_scoped_release release;
          r = cli::run_study(cfg, workers);
        }
        py::dict files;
        for (const auto& a : r.artifacts) files[py::str(a.name)] = a.content;
        return py::dict(py::arg("study") = r.study, py::arg("summary") = r.summary.dump(), py::arg("artifacts") = files,
                        py::arg("report") = r.report);
      },
      py::arg("config"), py::arg("workers") = 1);
  m.def("describe", [](const std::string& name) { return cli::describe(name); }, py::arg("name"));
}
