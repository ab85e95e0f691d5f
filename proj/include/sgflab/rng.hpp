#pragma once

#include <array>
#include <cstdint>

namespace sgflab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Stateless: the output is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept;
};

/// Maps 64 random bits to a double in the open interval (0, 1).
double bits_to_open_unit(std::uint64_t bits) noexcept;

/// Inverse of the standard normal CDF (Wichura, AS241 / PPND16).
/// Accurate to about 1e-16 relative over (0, 1).
double inverse_normal_cdf(double p) noexcept;

/// Sequential view over a Philox stream keyed by (seed, stream id).
/// Used for property sampling; Brownian increments use direct keying instead.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_bits() noexcept;
  double uniform() noexcept;                          // (0, 1)
  double uniform(double lo, double hi) noexcept;      // (lo, hi)
  double normal() noexcept;

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace sgflab
