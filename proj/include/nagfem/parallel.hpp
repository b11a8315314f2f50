#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nagfem {

// Every hot loop exists in two flavors: a plain serial reference and an
// OpenMP version. Results are bit-identical between the two because shared
// reductions use a fixed chunk layout that does not depend on thread count.
enum class Exec { serial, parallel };

namespace kernels {

inline constexpr std::size_t chunk_len = 1024;

template <class F>
inline void parallel_for(std::size_t n, Exec exec, F&& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

// Pairwise tree over fixed-order partials; deterministic for any thread count.
inline double tree_reduce(std::vector<double>& parts) {
  std::size_t n = parts.size();
  if (n == 0) return 0.0;
  while (n > 1) {
    std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) parts[i] += parts[i + half];
    n = half;
  }
  return parts[0];
}

template <class Get>
inline double sum(std::size_t n, Exec exec, Get&& get) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + chunk_len - 1) / chunk_len;
  std::vector<double> parts(nchunks, 0.0);
  parallel_for(nchunks, exec, [&](std::size_t c) {
    const std::size_t lo = c * chunk_len;
    const std::size_t hi = lo + chunk_len < n ? lo + chunk_len : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += get(i);
    parts[c] = s;
  });
  return tree_reduce(parts);
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y, Exec exec) {
  return sum(x.size(), exec, [&](std::size_t i) { return x[i] * y[i]; });
}

// min/max are exact reductions; any evaluation order gives the same value
template <class Get>
inline double min_value(std::size_t n, Exec exec, Get&& get) {
  const std::size_t nchunks = (n + chunk_len - 1) / chunk_len;
  std::vector<double> parts(nchunks);
  parallel_for(nchunks, exec, [&](std::size_t c) {
    const std::size_t lo = c * chunk_len;
    const std::size_t hi = lo + chunk_len < n ? lo + chunk_len : n;
    double m = get(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double v = get(i);
      if (v < m) m = v;
    }
    parts[c] = m;
  });
  double m = parts[0];
  for (std::size_t c = 1; c < parts.size(); ++c)
    if (parts[c] < m) m = parts[c];
  return m;
}

template <class Get>
inline double max_value(std::size_t n, Exec exec, Get&& get) {
  return -min_value(n, exec, [&](std::size_t i) { return -get(i); });
}

}  // namespace kernels
}  // namespace nagfem
