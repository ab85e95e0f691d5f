#include "sgflab/simulate.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "sgflab/errors.hpp"
#include "sgflab/format.hpp"

namespace sgflab {

namespace {

void require_finite(std::span<const double> v, const char* what, std::size_t step) {
  if (!all_finite(v)) throw NumericFailure(std::string("em_step: non-finite ") + what, step);
}

}  // namespace

Vector em_step(std::span<const double> x, std::span<const double> drift, double h, const SigmaAction& sigma,
               std::span<const double> dW, std::size_t step) {
  if (!(h > 0.0)) throw InvalidParameter("em_step: h must be positive");
  require_finite(x, "state", step);
  require_finite(drift, "drift", step);
  require_finite(dW, "increment", step);
  Vector noise(x.size(), 0.0);
  if (sigma) sigma(dW, noise);
  require_finite(noise, "noise", step);
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - h * drift[i] + noise[i];
  require_finite(out, "state", step + 1);
  return out;
}

Vector em_step(std::span<const double> x, std::span<const double> drift, double h, double sigma,
               std::span<const double> dW, std::size_t step) {
  return em_step(
      x, drift, h,
      [sigma](std::span<const double> w, std::span<double> out) {
        for (std::size_t i = 0; i < out.size() && i < w.size(); ++i) out[i] = sigma * w[i];
      },
      dW, step);
}

Trajectory simulate(const Dynamics& dyn, const VolatilitySchedule& vol, std::span<const double> x0, double T,
                    int level, const BrownianPath& path, std::size_t record_stride) {
  if (x0.size() != dyn.dim) throw InvalidParameter("simulate: x0 has wrong dimension");
  if (vol.dim != dyn.dim) throw InvalidParameter("simulate: volatility dimension differs from problem dimension");
  if (path.horizon() != T || path.level() != level)
    throw InvalidParameter("simulate: Brownian path horizon/level do not match the requested grid");
  if (path.dim() != vol.m) throw InvalidParameter("simulate: Brownian dimension differs from volatility m");
  if (record_stride == 0) throw InvalidParameter("simulate: record_stride must be >= 1");
  require_finite(x0, "initial state", 0);

  const std::size_t n = path.steps();
  const std::size_t d = dyn.dim;
  const double h = path.step_size();

  Trajectory tr;
  tr.level = level;
  tr.step_size = h;
  tr.stride = record_stride;
  const std::size_t n_rec = n / record_stride + (n % record_stride != 0 ? 2 : 1);
  tr.times.reserve(n_rec);
  tr.states.reserve(n_rec);
  tr.running_average.reserve(n_rec);

  Vector x(x0.begin(), x0.end());
  Vector drift(d), noise(d);
  Vector sum_x(d, 0.0);
  double sum_f = 0.0, sum_m = 0.0, sum_n = 0.0, sum_n2 = 0.0;

  auto record = [&](std::size_t k, double fval, double mnorm) {
    tr.times.push_back(static_cast<double>(k) * h);
    tr.states.push_back(x);
    tr.objective_gap.push_back(fval - dyn.objective_min);
    tr.drift_norm_sq.push_back(mnorm);
    if (k == 0) {
      tr.running_average.push_back(x);
      tr.running_objective_average.push_back(fval);
      tr.running_drift_norm_sq_average.push_back(mnorm);
      tr.running_norm_average.push_back(norm(x));
      tr.running_sqnorm_average.push_back(squared_norm(x));
      return;
    }
    const double inv = 1.0 / static_cast<double>(k);
    tr.running_average.push_back(scaled(sum_x, inv));
    tr.running_objective_average.push_back(sum_f * inv);
    tr.running_drift_norm_sq_average.push_back(sum_m * inv);
    tr.running_norm_average.push_back(sum_n * inv);
    tr.running_sqnorm_average.push_back(sum_n2 * inv);
  };

  for (std::size_t k = 0;; ++k) {
    dyn.drift(x, drift);
    const double fval = dyn.objective(x);
    const double mnorm = squared_norm(drift);
    if (k % record_stride == 0 || k == n) record(k, fval, mnorm);
    if (k == n) break;

    const double t = static_cast<double>(k) * h;
    for (std::size_t i = 0; i < d; ++i) sum_x[i] += x[i];
    sum_f += fval;
    sum_m += mnorm;
    const double xn2 = squared_norm(x);
    sum_n += std::sqrt(xn2);
    sum_n2 += xn2;

    vol.apply(t, x, path.increment(k), noise);
    const double fro = vol.frobenius_sq(t, x);
    if (fro > tr.max_noise_frobenius_sq) tr.max_noise_frobenius_sq = fro;
    for (std::size_t i = 0; i < d; ++i) x[i] = x[i] - h * drift[i] + noise[i];

    if (!all_finite(x)) throw NumericFailure("simulate: non-finite state", k + 1);
    if (norm(x) > kDivergenceGuard) throw Divergence("simulate: state norm exceeded divergence guard", k + 1);
  }
  return tr;
}

std::pair<Vector, Vector> interpolants(const Trajectory& traj, const Dynamics& dyn, const VolatilitySchedule& vol,
                                       const BrownianPath* fine_path, double t) {
  if (traj.stride != 1) throw InvalidParameter("interpolants: trajectory must be recorded at stride 1");
  const std::size_t n = traj.size() - 1;
  const double h = traj.step_size;
  const double T = static_cast<double>(n) * h;
  if (!(t >= 0.0) || t > T * (1.0 + 1e-15)) throw RangeError("interpolants: t outside [0, T]");

  std::size_t k = static_cast<std::size_t>(std::floor(t / h + 1e-9));
  if (k >= n) return {traj.states[n], traj.states[n]};
  const Vector& xk = traj.states[k];
  const double tk = static_cast<double>(k) * h;
  const double dt = t - tk;

  Vector drift(xk.size());
  dyn.drift(xk, drift);
  Vector tilde(xk.size());
  for (std::size_t i = 0; i < xk.size(); ++i) tilde[i] = xk[i] - dt * drift[i];

  if (vol.sigma0 != 0.0) {
    if (fine_path == nullptr) throw InvalidParameter("interpolants: noisy trajectory needs the refined driving path");
    if (fine_path->level() < traj.level) throw InvalidParameter("interpolants: fine path is coarser than trajectory");
    const double hf = fine_path->step_size();
    const double jf = t / hf;
    const auto j = static_cast<std::size_t>(std::llround(jf));
    if (std::fabs(jf - static_cast<double>(j)) > 1e-9 * (1.0 + jf))
      throw RangeError("interpolants: t is not a point of the refined grid");
    const std::size_t ratio = std::size_t{1} << (fine_path->level() - traj.level);
    Vector dW(fine_path->dim(), 0.0);
    for (std::size_t q = k * ratio; q < j; ++q) {
      const auto inc = fine_path->increment(q);
      for (std::size_t c = 0; c < dW.size(); ++c) dW[c] += inc[c];
    }
    Vector noise(xk.size());
    vol.apply(tk, xk, dW, noise);
    for (std::size_t i = 0; i < xk.size(); ++i) tilde[i] += noise[i];
  }
  return {xk, tilde};
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  const std::size_t d = traj.states.empty() ? 0 : traj.states.front().size();
  os << "t";
  for (std::size_t i = 0; i < d; ++i) os << ",x_" << i;
  os << ",favg,gap\n";
  for (std::size_t r = 0; r < traj.size(); ++r) {
    os << format_number(traj.times[r]);
    for (double v : traj.states[r]) os << ',' << format_number(v);
    os << ',' << format_number(traj.running_objective_average[r]) << ',' << format_number(traj.objective_gap[r])
       << '\n';
  }
}

}  // namespace sgflab
