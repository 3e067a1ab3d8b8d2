#pragma once

#include <atomic>
#include <cstdint>

namespace fluxdiff {

struct FluxCounts {
  std::uint64_t two_point_evals = 0;
  std::uint64_t one_point_evals = 0;
  std::uint64_t logmean_evals = 0;

  friend FluxCounts operator-(const FluxCounts& a, const FluxCounts& b) {
    return {a.two_point_evals - b.two_point_evals, a.one_point_evals - b.one_point_evals,
            a.logmean_evals - b.logmean_evals};
  }
  friend bool operator==(const FluxCounts&, const FluxCounts&) = default;
};

// Shared sink for flux-evaluation counts. Kernels increment thread-local
// tallies; a CountGuard folds the delta of its thread into the counter when
// it goes out of scope, so concurrent kernels never contend on the atomics.
class FluxCounter {
 public:
  FluxCounts snapshot() const {
    return {two_point_.load(), one_point_.load(), logmean_.load()};
  }
  std::uint64_t two_point_evals() const { return two_point_.load(); }
  std::uint64_t one_point_evals() const { return one_point_.load(); }
  std::uint64_t logmean_evals() const { return logmean_.load(); }

  void merge(const FluxCounts& delta) {
    two_point_.fetch_add(delta.two_point_evals, std::memory_order_relaxed);
    one_point_.fetch_add(delta.one_point_evals, std::memory_order_relaxed);
    logmean_.fetch_add(delta.logmean_evals, std::memory_order_relaxed);
  }

  void reset() {
    two_point_ = 0;
    one_point_ = 0;
    logmean_ = 0;
  }

 private:
  std::atomic<std::uint64_t> two_point_{0};
  std::atomic<std::uint64_t> one_point_{0};
  std::atomic<std::uint64_t> logmean_{0};
};

namespace detail {

inline thread_local FluxCounts tl_flux_counts{};

inline void count_two_point(std::uint64_t n = 1) { tl_flux_counts.two_point_evals += n; }
inline void count_one_point(std::uint64_t n = 1) { tl_flux_counts.one_point_evals += n; }
inline void count_logmean(std::uint64_t n = 1) { tl_flux_counts.logmean_evals += n; }

}  // namespace detail

// Counts every flux kernel invocation made on the constructing thread while
// the guard is alive. Nested guards each see the full delta of their scope.
class CountGuard {
 public:
  explicit CountGuard(FluxCounter& counter)
      : counter_(counter), start_(detail::tl_flux_counts) {}
  CountGuard(const CountGuard&) = delete;
  CountGuard& operator=(const CountGuard&) = delete;
  ~CountGuard() { counter_.merge(detail::tl_flux_counts - start_); }

 private:
  FluxCounter& counter_;
  FluxCounts start_;
};

[[nodiscard]] inline CountGuard count_guard(FluxCounter& counter) { return CountGuard(counter); }

}  // namespace fluxdiff
