#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sgflab {

/// One m-dimensional Brownian path on the dyadic grid h = T·2^{-level}.
///
/// The path is built top-down by Brownian-bridge refinement from a single
/// increment over [0, T]. Increments are stored as integer multiples of a
/// 2^-40 quantum, so refining splits each increment into two children whose
/// sum equals the parent exactly, in integers and in doubles. The increment
/// at (level, k, component) is a pure function of (seed, path_index, level,
/// k, component) through a counter-based generator.
class BrownianPath {
 public:
  static constexpr int kMaxLevel = 30;
  static constexpr double kQuantum = 0x1.0p-40;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t path_index() const noexcept { return path_index_; }
  double horizon() const noexcept { return horizon_; }
  int level() const noexcept { return level_; }
  std::size_t dim() const noexcept { return m_; }
  std::size_t steps() const noexcept { return std::size_t{1} << level_; }
  double step_size() const noexcept { return horizon_ / static_cast<double>(steps()); }

  /// ΔW_k = W((k+1)h) − W(kh), an m-vector.
  std::span<const double> increment(std::size_t k) const noexcept { return {increments_.data() + k * m_, m_}; }
  std::span<const std::int64_t> increment_quanta(std::size_t k) const noexcept { return {quanta_.data() + k * m_, m_}; }

  /// Splits every increment into two via the conditional bridge law.
  BrownianPath refine() const;
  /// Sums consecutive pairs of increments, inverting refine() exactly.
  BrownianPath coarsen() const;
  /// Repeated coarsen()/refine() to reach `target_level`.
  BrownianPath at_level(int target_level) const;

  /// W(t_k) for k = 0..steps(), component j.
  std::vector<double> values(std::size_t j = 0) const;

  friend BrownianPath sample_brownian(std::uint64_t seed, std::uint64_t path_index, double T, int level,
                                      std::size_t m);

 private:
  BrownianPath() = default;
  void sync_doubles();

  std::uint64_t seed_ = 0;
  std::uint64_t path_index_ = 0;
  double horizon_ = 0.0;
  int level_ = 0;
  std::size_t m_ = 1;
  std::vector<std::int64_t> quanta_;
  std::vector<double> increments_;
};

/// Samples the path with the given key at resolution level.
BrownianPath sample_brownian(std::uint64_t seed, std::uint64_t path_index, double T, int level, std::size_t m = 1);

/// Standard normal variate keyed by (seed, path, level, k, component).
double keyed_normal(std::uint64_t seed, std::uint64_t path_index, int level, std::uint64_t k,
                    std::size_t component) noexcept;

}  // namespace sgflab
