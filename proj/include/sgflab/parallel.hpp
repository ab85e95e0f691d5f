#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sgflab {

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(block) for block in [0, n_blocks) on up to `workers` threads.
/// Blocks are independent; if several throw, the exception of the lowest
/// block index is rethrown so failures are reported deterministically.
template <class Fn>
void parallel_for_blocks(std::size_t n_blocks, unsigned workers, Fn&& fn) {
  workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(n_blocks, 1)));
  std::vector<std::exception_ptr> errors(n_blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) {
      try {
        fn(b);
      } catch (...) {
        errors[b] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_failed{n_blocks};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t b = next.fetch_add(1);
          if (b >= n_blocks || b > first_failed.load()) return;
          try {
            fn(b);
          } catch (...) {
            errors[b] = std::current_exception();
            std::size_t cur = first_failed.load();
            while (b < cur && !first_failed.compare_exchange_weak(cur, b)) {
            }
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sgflab
