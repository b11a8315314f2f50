#pragma once

// Test oracles independent of the library under test: quadrature, dense
// factorization, finite differences, and randomized geometry/mesh inputs.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracles {

struct Tri {
  // vertices[i] = {x, y}
  std::array<std::array<double, 2>, 3> v;

  double area() const {
    const double ax = v[1][0] - v[0][0], ay = v[1][1] - v[0][1];
    const double bx = v[2][0] - v[0][0], by = v[2][1] - v[0][1];
    return 0.5 * (ax * by - ay * bx);
  }

  std::array<double, 2> point(double l0, double l1, double l2) const {
    return {l0 * v[0][0] + l1 * v[1][0] + l2 * v[2][0],
            l0 * v[0][1] + l1 * v[1][1] + l2 * v[2][1]};
  }
};

// Degree-5 rule, exact for all polynomials tested here up to cubic and beyond.
inline double tri_integrate(const Tri& t,
                            const std::function<double(double, double, double)>& f_bary) {
  static const double w0 = 0.225;
  static const double a1 = 0.059715871789770, b1 = 0.470142064105115,
                      w1 = 0.132394152788506;
  static const double a2 = 0.797426985353087, b2 = 0.101286507323456,
                      w2 = 0.125939180544827;
  double s = w0 * f_bary(1.0 / 3, 1.0 / 3, 1.0 / 3);
  s += w1 * (f_bary(a1, b1, b1) + f_bary(b1, a1, b1) + f_bary(b1, b1, a1));
  s += w2 * (f_bary(a2, b2, b2) + f_bary(b2, a2, b2) + f_bary(b2, b2, a2));
  return s * t.area();
}

// Same rule for integrands given in x-y coordinates.
inline double tri_integrate_xy(const Tri& t, const std::function<double(double, double)>& f) {
  return tri_integrate(t, [&](double l0, double l1, double l2) {
    const auto p = t.point(l0, l1, l2);
    return f(p[0], p[1]);
  });
}

// Gaussian elimination with partial pivoting; throws on a (near-)singular pivot.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (std::abs(a[piv][k]) < 1e-300) throw std::runtime_error("dense_solve: singular matrix");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < n; ++i) {
      const double m = a[i][k] / a[k][k];
      if (m == 0.0) continue;
      for (int j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

// Random triangle with positive orientation and decent conditioning.
inline Tri random_triangle(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (;;) {
    Tri t{{{{coord(rng), coord(rng)},
            {coord(rng), coord(rng)},
            {coord(rng), coord(rng)}}}};
    const double a = t.area();
    if (a < 0) {
      std::swap(t.v[1], t.v[2]);
    }
    double max_edge = 0;
    for (int i = 0; i < 3; ++i) {
      const auto& p = t.v[i];
      const auto& q = t.v[(i + 1) % 3];
      max_edge = std::max(max_edge, std::hypot(q[0] - p[0], q[1] - p[1]));
    }
    if (std::abs(t.area()) > 0.05 * max_edge * max_edge) return t;
  }
}

// Random symmetric positive definite 2x2 tensor with eigenvalues in [lo, hi].
inline std::array<double, 3> random_spd2(std::mt19937& rng, double lo = 0.5, double hi = 4.0) {
  std::uniform_real_distribution<double> ang(0.0, 3.141592653589793);
  std::uniform_real_distribution<double> eig(lo, hi);
  const double th = ang(rng), l1 = eig(rng), l2 = eig(rng);
  const double c = std::cos(th), s = std::sin(th);
  return {l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
}

}  // namespace oracles
