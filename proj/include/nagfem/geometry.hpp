#pragma once

#include <functional>

#include "nagfem/mesh.hpp"
#include "nagfem/parallel.hpp"

namespace nagfem {

// Symmetric dim-by-dim tensor, dim <= 3.
struct Tensor {
  int dim = 2;
  double v[3][3] = {};

  static Tensor identity(int d);
  // [[d00, d01], [d01, d11]]
  static Tensor sym2(double d00, double d01, double d11);
  bool spd() const;  // Sylvester criterion
  double quad(const double* a, const double* b) const;  // a . (T b)
};

enum class TensorAveraging { centroid, vertex_mean };

// Piecewise-constant-per-element view of a (possibly varying) diffusion
// tensor: the per-element value is the tensor at the centroid, or the mean of
// the vertex values when averaging = vertex_mean.
struct DiffusionField {
  int dim = 2;
  std::function<Tensor(const double* x)> eval;
  TensorAveraging averaging = TensorAveraging::centroid;

  static DiffusionField constant(const Tensor& t);
  Tensor element_value(const Mesh& m, int k) const;
};

// Per-element simplex geometry: edge matrix E (columns x_i - x_0), the basis
// gradients q_i (rows of E^{-1}, with q_0 = -sum q_i), volume |det E|/d!, and
// Euclidean heights h_i = 1/|q_i|.
struct ElementGeometry {
  int dim = 2;
  double volume = 0;
  double E[3][3] = {};
  double q[4][3] = {};
  double height[4] = {};
};

ElementGeometry element_geometry(const Mesh& m, int k);

// cosine[i][j] = -(q_i . D q_j) / (|q_i|_D |q_j|_D) for i != j, the cosine of
// the dihedral angle between faces i and j measured in the metric D^{-1};
// metric_height[i] = 1/|q_i|_D. Throws std::invalid_argument unless D is SPD.
struct DihedralTable {
  double cosine[4][4] = {};
  double metric_height[4] = {};
};

DihedralTable dihedral_cosines(const ElementGeometry& g, const Tensor& metric);

// d_acute   = (|domain|/n_elements)^(2/dim) * min over elements, i<j, of
//             -(q_i . D_K q_j);
// d_acute_ave averages the per-element minima with the same scaling.
// anoac: d_acute >= 0, aaac: d_acute > 0 (both up to a 1e-12 band).
struct AngleConditionReport {
  int dim = 0;
  double d_acute = 0;
  double d_acute_ave = 0;
  double scale = 0;  // (|domain|/n_elements)^(2/dim)
  bool anoac = false;
  bool aaac = false;
  int worst_element = -1;
  int worst_pair[2] = {-1, -1};  // local vertex indices
  double worst_value = 0;        // scaled minimum attained on worst_element
};

AngleConditionReport angle_condition(const Mesh& m, const DiffusionField& field,
                                     Exec exec = Exec::parallel);

}  // namespace nagfem
