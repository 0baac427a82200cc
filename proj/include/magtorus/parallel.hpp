#pragma once

// Parallel kernels over grids. The OpenMP path and the serial reference path
// share one chunking scheme: the index range is split into fixed-size chunks
// (independent of thread count), each chunk is accumulated in index order,
// and chunk partials are folded pairwise in a fixed tree order. Both paths
// therefore produce bit-identical sums, and results do not depend on
// OMP_NUM_THREADS. The serial path is kept as the reference implementation
// for tests and for the magtorus-bench comparison.

#include <cstddef>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magtorus {

enum class Exec { serial, parallel };

namespace detail {
inline Exec& default_exec_slot() {
  static Exec e = [] {
    const char* env = std::getenv("MAGTORUS_SERIAL");
    return (env && env[0] == '1') ? Exec::serial : Exec::parallel;
  }();
  return e;
}
}  // namespace detail

inline Exec default_exec() { return detail::default_exec_slot(); }
inline void set_default_exec(Exec e) { detail::default_exec_slot() = e; }

inline constexpr std::size_t kChunk = 4096;

// Sum of term(i) for i in [0, n). T needs operator+=.
template <class T, class F>
T chunked_sum(std::size_t n, F&& term, T zero, Exec exec = default_exec()) {
  if (n == 0) return zero;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<T> partial(nchunks, zero);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
  for (long long c = 0; c < (long long)nchunks; ++c) {
    const std::size_t lo = std::size_t(c) * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    T acc = zero;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[std::size_t(c)] = acc;
  }
  // pairwise fold, fixed order
  std::size_t m = nchunks;
  while (m > 1) {
    const std::size_t half = (m + 1) / 2;
    for (std::size_t i = 0; i + half < m; ++i) partial[i] += partial[i + half];
    m = half;
  }
  return partial[0];
}

template <class F>
void parallel_for(std::size_t n, F&& body, Exec exec = default_exec()) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
  for (long long i = 0; i < (long long)n; ++i) body(std::size_t(i));
}

// Max-reduction with the same chunking discipline.
template <class F>
double chunked_max(std::size_t n, F&& value, Exec exec = default_exec()) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
  for (long long c = 0; c < (long long)nchunks; ++c) {
    const std::size_t lo = std::size_t(c) * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc = std::max(acc, value(i));
    partial[std::size_t(c)] = acc;
  }
  double m = 0.0;
  for (double p : partial) m = std::max(m, p);
  return m;
}

}  // namespace magtorus
