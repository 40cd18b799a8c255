#pragma once

// Deterministic parallel map: each index writes only its own slot, so the
// result is identical for any worker count.

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace drivol {

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned workers = 0) {
  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) {
      workers = 1;
    }
  }
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = static_cast<std::size_t>(w) * chunk;
    if (begin >= n) {
      break;
    }
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) {
        fn(i);
      }
    });
  }
  for (auto& t : threads) {
    t.join();
  }
}

}  // namespace drivol
