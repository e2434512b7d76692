#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace plumbcat {

/// Worker cap from PLUMBCAT_THREADS, else the hardware concurrency.
inline unsigned thread_count() {
  if (const char *env = std::getenv("PLUMBCAT_THREADS")) {
    try {
      long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (...) {
    }
    return 1;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n). Each index writes only its own output slot, so
/// results do not depend on the schedule.
template <class F>
void parallel_for(std::size_t n, F f) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  for (auto &t : pool) t.join();
  for (auto &e : failures)
    if (e) std::rethrow_exception(e);
}

}  // namespace plumbcat
