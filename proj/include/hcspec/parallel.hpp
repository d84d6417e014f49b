#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hcspec {

/// Worker count used when a caller does not pass one; set once by the CLI (--jobs).
int default_jobs();
void set_default_jobs(int jobs);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception is rethrown.
template <class F>
void parallel_for(int n, F&& fn, int jobs = default_jobs()) {
  jobs = std::clamp(jobs, 1, std::max(1, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex guard;
  {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(guard);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hcspec
