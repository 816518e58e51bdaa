#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wickstat {

// requested > 0 wins, then WICKSTAT_WORKERS, then the hardware count.
int resolve_workers(int requested = 0);

// Calls fn(i) for i in [0, n) on up to `workers` threads, in contiguous
// chunks. Results must be written to per-index slots by the caller; any
// reduction happens afterwards in index order, so the outcome does not depend
// on the worker count. The exception from the lowest failing chunk is
// rethrown.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  std::size_t w = workers < 1 ? 1 : static_cast<std::size_t>(workers);
  if (w > n) w = n;
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = n * t / w, hi = n * (t + 1) / w;
    threads.emplace_back([&, lo, hi, t] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace wickstat
