#include "nagfem/geometry.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nagfem {

Tensor Tensor::identity(int d) {
  Tensor t;
  t.dim = d;
  for (int i = 0; i < d; ++i) t.v[i][i] = 1.0;
  return t;
}

Tensor Tensor::sym2(double d00, double d01, double d11) {
  Tensor t;
  t.dim = 2;
  t.v[0][0] = d00;
  t.v[0][1] = t.v[1][0] = d01;
  t.v[1][1] = d11;
  return t;
}

bool Tensor::spd() const {
  if (v[0][0] <= 0.0) return false;
  if (dim == 1) return true;
  const double det2 = v[0][0] * v[1][1] - v[0][1] * v[1][0];
  if (det2 <= 0.0) return false;
  if (dim == 2) return true;
  const double det3 = v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) -
                      v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0]) +
                      v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
  return det3 > 0.0;
}

double Tensor::quad(const double* a, const double* b) const {
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s += a[i] * v[i][j] * b[j];
  return s;
}

DiffusionField DiffusionField::constant(const Tensor& t) {
  DiffusionField f;
  f.dim = t.dim;
  f.eval = [t](const double*) { return t; };
  return f;
}

Tensor DiffusionField::element_value(const Mesh& m, int k) const {
  const int* e = m.element(k);
  if (averaging == TensorAveraging::centroid) {
    double c[3] = {};
    for (int j = 0; j <= m.dim; ++j) {
      const double* x = m.vertex(e[j]);
      for (int d = 0; d < m.dim; ++d) c[d] += x[d];
    }
    for (int d = 0; d < m.dim; ++d) c[d] /= (m.dim + 1);
    return eval(c);
  }
  Tensor t;
  t.dim = dim;
  for (int j = 0; j <= m.dim; ++j) {
    const Tensor tj = eval(m.vertex(e[j]));
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) t.v[r][c] += tj.v[r][c] / (m.dim + 1);
  }
  return t;
}

ElementGeometry element_geometry(const Mesh& m, int k) {
  ElementGeometry g;
  g.dim = m.dim;
  const int* e = m.element(k);
  const double* x0 = m.vertex(e[0]);
  for (int j = 1; j <= m.dim; ++j) {
    const double* xj = m.vertex(e[j]);
    for (int r = 0; r < m.dim; ++r) g.E[r][j - 1] = xj[r] - x0[r];
  }

  double det = 0.0;
  double inv[3][3] = {};
  if (m.dim == 1) {
    det = g.E[0][0];
    inv[0][0] = 1.0 / det;
  } else if (m.dim == 2) {
    det = g.E[0][0] * g.E[1][1] - g.E[0][1] * g.E[1][0];
    inv[0][0] = g.E[1][1] / det;
    inv[0][1] = -g.E[0][1] / det;
    inv[1][0] = -g.E[1][0] / det;
    inv[1][1] = g.E[0][0] / det;
  } else {
    const auto& E = g.E;
    inv[0][0] = E[1][1] * E[2][2] - E[1][2] * E[2][1];
    inv[0][1] = E[0][2] * E[2][1] - E[0][1] * E[2][2];
    inv[0][2] = E[0][1] * E[1][2] - E[0][2] * E[1][1];
    inv[1][0] = E[1][2] * E[2][0] - E[1][0] * E[2][2];
    inv[1][1] = E[0][0] * E[2][2] - E[0][2] * E[2][0];
    inv[1][2] = E[0][2] * E[1][0] - E[0][0] * E[1][2];
    inv[2][0] = E[1][0] * E[2][1] - E[1][1] * E[2][0];
    inv[2][1] = E[0][1] * E[2][0] - E[0][0] * E[2][1];
    inv[2][2] = E[0][0] * E[1][1] - E[0][1] * E[1][0];
    det = E[0][0] * inv[0][0] + E[0][1] * inv[1][0] + E[0][2] * inv[2][0];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) inv[r][c] /= det;
  }
  if (!(det > 0.0))
    throw std::invalid_argument("geometry: element " + std::to_string(k) + " is degenerate");

  const double fact = m.dim == 1 ? 1.0 : m.dim == 2 ? 2.0 : 6.0;
  g.volume = det / fact;
  // rows of E^{-1} are the gradients q_1..q_d
  for (int i = 1; i <= m.dim; ++i)
    for (int r = 0; r < m.dim; ++r) g.q[i][r] = inv[i - 1][r];
  for (int r = 0; r < m.dim; ++r) {
    double s = 0.0;
    for (int i = 1; i <= m.dim; ++i) s += g.q[i][r];
    g.q[0][r] = -s;
  }
  for (int i = 0; i <= m.dim; ++i) {
    double n2 = 0.0;
    for (int r = 0; r < m.dim; ++r) n2 += g.q[i][r] * g.q[i][r];
    g.height[i] = 1.0 / std::sqrt(n2);
  }
  return g;
}

DihedralTable dihedral_cosines(const ElementGeometry& g, const Tensor& metric) {
  if (metric.dim != g.dim)
    throw std::invalid_argument("geometry: metric dimension mismatch");
  if (!metric.spd()) throw std::invalid_argument("geometry: metric tensor is not SPD");
  DihedralTable t;
  double norm[4];
  for (int i = 0; i <= g.dim; ++i) {
    norm[i] = std::sqrt(metric.quad(g.q[i], g.q[i]));
    t.metric_height[i] = 1.0 / norm[i];
  }
  for (int i = 0; i <= g.dim; ++i)
    for (int j = 0; j <= g.dim; ++j)
      if (i != j) t.cosine[i][j] = -metric.quad(g.q[i], g.q[j]) / (norm[i] * norm[j]);
  return t;
}

namespace {
constexpr double kAngleTol = 1e-12;
}

AngleConditionReport angle_condition(const Mesh& m, const DiffusionField& field, Exec exec) {
  const int ne = m.n_elements();
  if (ne == 0) throw std::invalid_argument("geometry: empty mesh");
  std::vector<double> mins(ne);
  std::vector<double> volumes(ne);
  std::atomic<int> bad{-1};  // exceptions cannot leave an OpenMP region
  kernels::parallel_for(ne, exec, [&](std::size_t k) {
    const Tensor d = field.element_value(m, static_cast<int>(k));
    if (!d.spd()) {
      int expected = -1;
      bad.compare_exchange_strong(expected, static_cast<int>(k));
      mins[k] = 0.0;
      volumes[k] = 0.0;
      return;
    }
    const ElementGeometry g = element_geometry(m, static_cast<int>(k));
    double mn = 0.0;
    bool first = true;
    for (int i = 0; i <= m.dim; ++i)
      for (int j = i + 1; j <= m.dim; ++j) {
        const double v = -d.quad(g.q[i], g.q[j]);
        if (first || v < mn) mn = v, first = false;
      }
    mins[k] = mn;
    volumes[k] = g.volume;
  });
  if (bad.load() >= 0)
    throw std::invalid_argument("geometry: diffusion tensor not SPD on element " +
                                std::to_string(bad.load()));

  const double volume = kernels::sum(ne, exec, [&](std::size_t k) { return volumes[k]; });
  const double scale = std::pow(volume / ne, 2.0 / m.dim);

  AngleConditionReport r;
  r.dim = m.dim;
  r.scale = scale;
  double mn = mins[0];
  int arg = 0;
  for (int k = 1; k < ne; ++k)
    if (mins[k] < mn) mn = mins[k], arg = k;
  r.d_acute = scale * mn;
  r.d_acute_ave = scale * kernels::sum(ne, exec, [&](std::size_t k) { return mins[k]; }) / ne;
  r.worst_element = arg;
  r.worst_value = scale * mn;
  {
    const Tensor d = field.element_value(m, arg);
    const ElementGeometry g = element_geometry(m, arg);
    double best = 0.0;
    bool first = true;
    for (int i = 0; i <= m.dim; ++i)
      for (int j = i + 1; j <= m.dim; ++j) {
        const double v = -d.quad(g.q[i], g.q[j]);
        if (first || v < best) {
          best = v;
          first = false;
          r.worst_pair[0] = i;
          r.worst_pair[1] = j;
        }
      }
  }
  r.anoac = r.d_acute >= -kAngleTol;
  r.aaac = r.d_acute > kAngleTol;
  return r;
}

}  // namespace nagfem
