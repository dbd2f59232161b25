#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace frozen {

// FROZEN_ORBIT_THREADS if set, else the requested count, else hardware
// concurrency. Always at least 1.
unsigned resolve_threads(unsigned requested = 0);

// Runs fn(i) for i in [0, n) on a pool of `threads` workers. Results are
// stored by index, so output order does not depend on scheduling. The first
// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, threads, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace frozen
