#ifndef HKB_PARALLEL_HPP
#define HKB_PARALLEL_HPP

// Deterministic data-parallel helpers. Work is split into contiguous index
// ranges fixed by (n, jobs); per-range results are combined in range order,
// so integer reductions are bit-identical for every worker count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace hkb {

inline unsigned effective_jobs(unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  return jobs;
}

/// Calls fn(begin, end) on `jobs` disjoint ranges covering [0, n) and
/// returns the per-range results in range order.
template <class Fn>
auto parallel_ranges(std::uint64_t n, unsigned jobs, Fn fn) {
  using R = decltype(fn(std::uint64_t{0}, std::uint64_t{0}));
  jobs = effective_jobs(jobs);
  const std::uint64_t parts = std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs, n));
  std::vector<R> results(parts);
  auto bounds = [&](std::uint64_t i) { return n * i / parts; };
  if (parts == 1) {
    results[0] = fn(0, n);
    return results;
  }
  std::vector<std::exception_ptr> errors(parts);
  std::vector<std::thread> pool;
  pool.reserve(parts);
  for (std::uint64_t i = 0; i < parts; ++i)
    pool.emplace_back([&, i] {
      try {
        results[i] = fn(bounds(i), bounds(i + 1));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

template <class Fn>
std::uint64_t parallel_sum(std::uint64_t n, unsigned jobs, Fn fn) {
  std::uint64_t total = 0;
  for (auto v : parallel_ranges(n, jobs, fn)) total += v;
  return total;
}

}  // namespace hkb

#endif  // HKB_PARALLEL_HPP
