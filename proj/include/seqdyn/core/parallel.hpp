#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace seqdyn {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index writes only
// its own output slot, so results do not depend on scheduling. The first
// exception (by index) is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const std::size_t count = jobs < n ? jobs : n;
  for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace seqdyn
