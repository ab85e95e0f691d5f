#include "sgflab/estimate.hpp"

#include <cmath>

#include "sgflab/errors.hpp"
#include "sgflab/parallel.hpp"

namespace sgflab {

namespace {

struct QuantityInfo {
  Quantity q;
  std::string_view name;
};

constexpr QuantityInfo kQuantities[] = {
    {Quantity::objective_gap, "objective_gap"},
    {Quantity::ergodic_objective_gap, "ergodic_objective_gap"},
    {Quantity::averaged_objective_gap, "averaged_objective_gap"},
    {Quantity::sq_distance, "sq_distance"},
    {Quantity::operator_norm_sq, "operator_norm_sq"},
    {Quantity::ergodic_operator_norm_sq, "ergodic_operator_norm_sq"},
    {Quantity::distance_of_mean_average, "distance_of_mean_average"},
};

std::vector<double> record_times(const PathSetup& s) {
  const std::size_t n = std::size_t{1} << s.level;
  const double h = s.T / static_cast<double>(n);
  std::vector<double> t;
  for (std::size_t k = 0; k <= n; ++k)
    if (k % s.stride == 0 || k == n) t.push_back(static_cast<double>(k) * h);
  return t;
}

}  // namespace

std::string_view quantity_name(Quantity q) {
  for (const auto& info : kQuantities)
    if (info.q == q) return info.name;
  return "unknown";
}

Quantity parse_quantity(std::string_view name) {
  for (const auto& info : kQuantities)
    if (info.name == name) return info.q;
  std::string valid;
  for (const auto& info : kQuantities) valid += (valid.empty() ? "" : ", ") + std::string(info.name);
  throw InvalidParameter("unknown quantity '" + std::string(name) + "' (valid: " + valid + ")");
}

const std::vector<Quantity>& all_quantities() {
  static const std::vector<Quantity> all = [] {
    std::vector<Quantity> v;
    for (const auto& info : kQuantities) v.push_back(info.q);
    return v;
  }();
  return all;
}

std::vector<double> quantity_series(const Trajectory& tr, const Dynamics& dyn, Quantity q) {
  std::vector<double> out(tr.size());
  for (std::size_t r = 0; r < tr.size(); ++r) {
    switch (q) {
      case Quantity::objective_gap: out[r] = tr.objective_gap[r]; break;
      case Quantity::ergodic_objective_gap:
        out[r] = dyn.objective(tr.running_average[r]) - dyn.objective_min;
        break;
      case Quantity::averaged_objective_gap: out[r] = tr.running_objective_average[r] - dyn.objective_min; break;
      case Quantity::sq_distance: {
        const double dd = dyn.dist_to_solution(tr.states[r]);
        out[r] = dd * dd;
        break;
      }
      case Quantity::operator_norm_sq: out[r] = tr.drift_norm_sq[r]; break;
      case Quantity::ergodic_operator_norm_sq: out[r] = tr.running_drift_norm_sq_average[r]; break;
      case Quantity::distance_of_mean_average:
        throw InvalidParameter("quantity_series: distance_of_mean_average is not a per-path quantity");
    }
  }
  return out;
}

std::vector<GapSeries> estimate(const PathSetup& setup, const std::vector<Quantity>& quantities,
                                std::size_t n_paths, unsigned workers) {
  if (n_paths < 2) throw InvalidParameter("estimate: n_paths must be >= 2");
  if (quantities.empty()) throw InvalidParameter("estimate: no quantity requested");
  const std::size_t d = setup.dynamics.dim;
  const std::vector<double> times = record_times(setup);
  const std::size_t nt = times.size();

  // Channel layout: one channel per scalar quantity, d channels (components of
  // X̄) for distance_of_mean_average.
  std::vector<std::size_t> offset(quantities.size());
  std::size_t n_channels = 0;
  for (std::size_t i = 0; i < quantities.size(); ++i) {
    offset[i] = n_channels;
    n_channels += quantities[i] == Quantity::distance_of_mean_average ? d : 1;
  }

  const std::size_t n_blocks = (n_paths + kPathBlock - 1) / kPathBlock;
  std::vector<std::vector<MomentAccumulator>> blocks(n_blocks);

  parallel_for_blocks(n_blocks, workers, [&](std::size_t b) {
    std::vector<MomentAccumulator> acc(n_channels * nt);
    const std::size_t first = b * kPathBlock;
    const std::size_t last = std::min(n_paths, first + kPathBlock);
    for (std::size_t p = first; p < last; ++p) {
      Trajectory tr;
      try {
        tr = setup.run(p);
      } catch (const Error& e) {
        throw PathFailure(p, e.what());
      }
      for (std::size_t i = 0; i < quantities.size(); ++i) {
        if (quantities[i] == Quantity::distance_of_mean_average) {
          for (std::size_t r = 0; r < nt; ++r)
            for (std::size_t c = 0; c < d; ++c) acc[(offset[i] + c) * nt + r].add(tr.running_average[r][c]);
        } else {
          const std::vector<double> v = quantity_series(tr, setup.dynamics, quantities[i]);
          for (std::size_t r = 0; r < nt; ++r) acc[offset[i] * nt + r].add(v[r]);
        }
      }
    }
    blocks[b] = std::move(acc);
  });

  std::vector<MomentAccumulator> total(n_channels * nt);
  for (const auto& blk : blocks)
    for (std::size_t j = 0; j < total.size(); ++j) total[j].merge(blk[j]);

  std::vector<GapSeries> out;
  out.reserve(quantities.size());
  for (std::size_t i = 0; i < quantities.size(); ++i) {
    GapSeries s;
    s.quantity = quantities[i];
    s.times = times;
    s.n_paths = n_paths;
    s.mean.resize(nt);
    s.ci_halfwidth.resize(nt);
    s.sample_std.resize(nt);
    if (quantities[i] == Quantity::distance_of_mean_average) {
      for (std::size_t r = 0; r < nt; ++r) {
        Vector m(d);
        double var = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          const auto& a = total[(offset[i] + c) * nt + r];
          m[c] = a.mean;
          var += a.variance();
        }
        s.mean[r] = setup.dynamics.dist_to_solution(m);
        s.sample_std[r] = std::sqrt(var);
        s.ci_halfwidth[r] = 1.96 * std::sqrt(var / static_cast<double>(n_paths));
      }
    } else {
      for (std::size_t r = 0; r < nt; ++r) {
        const auto& a = total[offset[i] * nt + r];
        s.mean[r] = a.mean;
        s.sample_std[r] = std::sqrt(a.variance());
        s.ci_halfwidth[r] = 1.96 * s.sample_std[r] / std::sqrt(static_cast<double>(n_paths));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

GapSeries estimate(const PathSetup& setup, Quantity quantity, std::size_t n_paths, unsigned workers) {
  return std::move(estimate(setup, std::vector<Quantity>{quantity}, n_paths, workers).front());
}

}  // namespace sgflab
