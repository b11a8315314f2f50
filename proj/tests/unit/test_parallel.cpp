#include <atomic>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nagfem/parallel.hpp"

using namespace nagfem;

namespace {

// mixes tiny and huge magnitudes so a reassociated sum would drift
std::vector<double> adversarial(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> mag(-12, 12);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng) * std::pow(10.0, mag(rng));
  return v;
}

}  // namespace

TEST_CASE("reductions are bitwise identical across execution modes") {
  for (std::size_t n : {std::size_t(1), std::size_t(7), std::size_t(1023), std::size_t(1024),
                        std::size_t(1025), std::size_t(4096), std::size_t(100001)}) {
    const std::vector<double> x = adversarial(n, 91 + static_cast<unsigned>(n));
    const std::vector<double> y = adversarial(n, 17 + static_cast<unsigned>(n));
    CHECK(kernels::sum(n, Exec::serial, [&](std::size_t i) { return x[i]; }) ==
          kernels::sum(n, Exec::parallel, [&](std::size_t i) { return x[i]; }));
    CHECK(kernels::dot(x, y, Exec::serial) == kernels::dot(x, y, Exec::parallel));
    CHECK(kernels::min_value(n, Exec::serial, [&](std::size_t i) { return x[i]; }) ==
          kernels::min_value(n, Exec::parallel, [&](std::size_t i) { return x[i]; }));
    CHECK(kernels::max_value(n, Exec::serial, [&](std::size_t i) { return x[i]; }) ==
          kernels::max_value(n, Exec::parallel, [&](std::size_t i) { return x[i]; }));
  }
}

TEST_CASE("reductions produce the expected values") {
  std::vector<double> v{3.0, -7.5, 0.25, 11.0, -7.5};
  CHECK(kernels::sum(v.size(), Exec::parallel, [&](std::size_t i) { return v[i]; }) ==
        doctest::Approx(-0.75));
  CHECK(kernels::min_value(v.size(), Exec::parallel, [&](std::size_t i) { return v[i]; }) == -7.5);
  CHECK(kernels::max_value(v.size(), Exec::parallel, [&](std::size_t i) { return v[i]; }) == 11.0);
  CHECK(kernels::sum(0, Exec::parallel, [](std::size_t) { return 1.0; }) == 0.0);
  CHECK(kernels::dot(v, v, Exec::serial) == doctest::Approx(3.0 * 3 + 7.5 * 7.5 * 2 + 0.0625 + 121));

  // the exact min/max land on an element even when values repeat
  const std::vector<double> big = adversarial(50000, 5);
  const double lo = kernels::min_value(big.size(), Exec::parallel,
                                       [&](std::size_t i) { return big[i]; });
  const double hi = kernels::max_value(big.size(), Exec::parallel,
                                       [&](std::size_t i) { return big[i]; });
  double wlo = big[0], whi = big[0];
  for (double x : big) {
    wlo = std::min(wlo, x);
    whi = std::max(whi, x);
  }
  CHECK(lo == wlo);
  CHECK(hi == whi);
}

TEST_CASE("parallel_for touches each index exactly once") {
  for (Exec exec : {Exec::serial, Exec::parallel}) {
    const std::size_t n = 10007;
    std::vector<std::atomic<int>> hits(n);
    for (auto& h : hits) h = 0;
    kernels::parallel_for(n, exec, [&](std::size_t i) { ++hits[i]; });
    for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
  }
}

TEST_CASE("tree_reduce matches plain summation of the partials") {
  std::vector<double> parts{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(kernels::tree_reduce(parts) == 15.0);
  std::vector<double> empty;
  CHECK(kernels::tree_reduce(empty) == 0.0);
  std::vector<double> one{42.0};
  CHECK(kernels::tree_reduce(one) == 42.0);
}
