#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nagfem/geometry.hpp"
#include "nagfem/mesh.hpp"
#include "nagfem/sparse.hpp"

namespace nagfem {

// Scalar field of position and time, evaluated at a coordinate pointer of
// mesh dimension. Used for boundary data, initial data, and exact solutions.
using ScalarTimeFunction = std::function<double(const double*, double)>;

// Reaction growth factor: the source term is u*f(u). The derivative is
// validated against central differences on [-2, 2] at construction.
class ReactionFunction {
 public:
  static ReactionFunction nagumo(double a);  // f(u) = (1 - u)(u - a), a in (0,1)
  static ReactionFunction custom(std::function<double(double)> f,
                                 std::function<double(double)> fprime);

  double f(double u) const { return f_(u); }
  double df(double u) const { return df_(u); }

  bool is_nagumo() const { return is_nagumo_; }
  double nagumo_a() const;  // throws unless built by nagumo()

 private:
  ReactionFunction() = default;
  std::function<double(double)> f_, df_;
  bool is_nagumo_ = false;
  double a_ = 0;
};

enum class Treatment { em, im, heim1, heim2 };
enum class Lumping { consistent, lumped };

const char* name(Treatment t);
const char* name(Lumping l);
Treatment parse_treatment(const std::string& s);  // "em"/"im"/"heim1"/"heim2"
Lumping parse_lumping(const std::string& s);      // "consistent"/"lumped"

// B multiplies the unknown u^{n+1} (moved to the left-hand side), C multiplies
// the known u^n. A treatment omits the matrices it does not use.
struct ReactionMatrices {
  std::optional<SparseMatrix> b;
  std::optional<SparseMatrix> c;
};

// Mass matrix: interior row entries over elements shared by i and j are
// |K|(1 + delta_ij)/((d+1)(d+2)); rows of boundary vertices are zero.
SparseMatrix assemble_mass(const Mesh& m, Exec exec = Exec::parallel);

// Diagonal of the lumped mass: |omega_i|/(d+1) for interior i, 0 on the boundary.
std::vector<double> assemble_lumped_mass(const Mesh& m, Exec exec = Exec::parallel);

// Stiffness: interior entries sum_K |K| (grad phi_i)^T D_K (grad phi_j);
// boundary rows are identity rows. Throws invalid_argument on a non-SPD sample.
SparseMatrix assemble_stiffness(const Mesh& m, const DiffusionField& field,
                                Exec exec = Exec::parallel);

// Mass matrix weighted by the nodal interpolant of `weight`: interior entries
// int w phi_j phi_i with the cubic integrals evaluated exactly, boundary rows
// zero. The scheme-specific reaction matrices are instances of this.
SparseMatrix assemble_weighted_mass(const Mesh& m, const std::vector<double>& weight,
                                    Exec exec = Exec::parallel);

ReactionMatrices assemble_reaction(const Mesh& m, const std::vector<double>& u_n,
                                   const ReactionFunction& rf, Treatment treatment,
                                   Lumping lumping, Exec exec = Exec::parallel);

// Entry i = 0 for interior vertices, g(x_i, t) for boundary vertices.
std::vector<double> boundary_vector(const Mesh& m, const ScalarTimeFunction& g, double t);

// n-by-n matrix with the given diagonal; zero entries are kept out of the pattern.
SparseMatrix diagonal_matrix(const std::vector<double>& d);

// Exact value of int_K phi_a phi_b phi_c divided by |K| on a d-simplex.
double basis_triple_product(int dim, int a, int b, int c);

}  // namespace nagfem
