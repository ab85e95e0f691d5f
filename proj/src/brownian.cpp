#include "sgflab/brownian.hpp"

#include <cmath>

#include "sgflab/errors.hpp"
#include "sgflab/rng.hpp"

namespace sgflab {

double keyed_normal(std::uint64_t seed, std::uint64_t path_index, int level, std::uint64_t k,
                    std::size_t component) noexcept {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(k),
                                (static_cast<std::uint32_t>(level) << 24) | static_cast<std::uint32_t>(component & 0xFFFFFFu),
                                static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto out = Philox4x32::generate(ctr, key);
  const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  return inverse_normal_cdf(bits_to_open_unit(bits));
}

namespace {

std::int64_t to_quanta(double x) { return std::llround(x / BrownianPath::kQuantum); }

}  // namespace

void BrownianPath::sync_doubles() {
  increments_.resize(quanta_.size());
  for (std::size_t i = 0; i < quanta_.size(); ++i) increments_[i] = static_cast<double>(quanta_[i]) * kQuantum;
}

BrownianPath BrownianPath::refine() const {
  if (level_ >= kMaxLevel) throw InvalidParameter("BrownianPath::refine: maximum level reached");
  BrownianPath child = *this;
  child.level_ = level_ + 1;
  const std::size_t n = steps();
  // Given the parent increment c over a cell of length H, the left child is
  // N(c/2, H/4).
  const double half_sd = 0.5 * std::sqrt(step_size());
  child.quanta_.assign(2 * n * m_, 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < m_; ++j) {
      const std::int64_t parent = quanta_[k * m_ + j];
      const double z = keyed_normal(seed_, path_index_, child.level_, k, j);
      const std::int64_t left = (parent >> 1) + to_quanta(half_sd * z);
      child.quanta_[(2 * k) * m_ + j] = left;
      child.quanta_[(2 * k + 1) * m_ + j] = parent - left;
    }
  }
  child.sync_doubles();
  return child;
}

BrownianPath BrownianPath::coarsen() const {
  if (level_ == 0) throw InvalidParameter("BrownianPath::coarsen: already at level 0");
  BrownianPath parent = *this;
  parent.level_ = level_ - 1;
  const std::size_t n = parent.steps();
  parent.quanta_.assign(n * m_, 0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < m_; ++j)
      parent.quanta_[k * m_ + j] = quanta_[(2 * k) * m_ + j] + quanta_[(2 * k + 1) * m_ + j];
  parent.sync_doubles();
  return parent;
}

BrownianPath BrownianPath::at_level(int target_level) const {
  if (target_level < 0 || target_level > kMaxLevel) throw InvalidParameter("BrownianPath::at_level: level out of range");
  BrownianPath p = *this;
  while (p.level_ > target_level) p = p.coarsen();
  while (p.level_ < target_level) p = p.refine();
  return p;
}

std::vector<double> BrownianPath::values(std::size_t j) const {
  std::vector<double> w(steps() + 1, 0.0);
  std::int64_t acc = 0;
  for (std::size_t k = 0; k < steps(); ++k) {
    acc += quanta_[k * m_ + j];
    w[k + 1] = static_cast<double>(acc) * kQuantum;
  }
  return w;
}

BrownianPath sample_brownian(std::uint64_t seed, std::uint64_t path_index, double T, int level, std::size_t m) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidParameter("sample_brownian: T must be positive");
  if (level < 0 || level > BrownianPath::kMaxLevel) throw InvalidParameter("sample_brownian: level out of range");
  if (m == 0) throw InvalidParameter("sample_brownian: Brownian dimension must be positive");
  BrownianPath p;
  p.seed_ = seed;
  p.path_index_ = path_index;
  p.horizon_ = T;
  p.level_ = 0;
  p.m_ = m;
  p.quanta_.resize(m);
  const double sd = std::sqrt(T);
  for (std::size_t j = 0; j < m; ++j) p.quanta_[j] = to_quanta(sd * keyed_normal(seed, path_index, 0, 0, j));
  p.sync_doubles();
  while (p.level_ < level) p = p.refine();
  return p;
}

}  // namespace sgflab
