#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nagfem/parallel.hpp"

namespace nagfem {

// CSR matrix with a triplet staging area; duplicate triplets are summed once
// at compress() time. Rows with no entries are valid (all-zero rows).
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool compressed() const { return compressed_; }
  std::size_t nnz() const { return val_.size(); }

  void reserve(std::size_t n);
  void add(int i, int j, double v);  // staging; invalid after compress()
  void compress();

  // compressed accessors
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col() const { return col_; }
  const std::vector<double>& val() const { return val_; }
  std::vector<double>& val() { return val_; }
  double coeff(int i, int j) const;  // 0 when absent

  void matvec(const double* x, double* y, Exec exec = Exec::parallel) const;
  std::vector<double> apply(const std::vector<double>& x, Exec exec = Exec::parallel) const;

 private:
  int rows_ = 0, cols_ = 0;
  bool compressed_ = false;
  std::vector<int> ti_, tj_;
  std::vector<double> tv_;
  std::vector<int> row_ptr_, col_;
  std::vector<double> val_;
};

// alpha*A + beta*B on the union pattern; inputs must be compressed.
SparseMatrix add_scaled(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

// Adds d[i] to the diagonal of compressed A (entry must be present or is created).
SparseMatrix add_diagonal(const SparseMatrix& a, const std::vector<double>& d, double scale);

bool is_symmetric(const SparseMatrix& a, double rel_tol = 1e-14);

struct MatrixProperties {
  bool z_matrix = false;                // all off-diagonal entries <= tau_z
  bool strictly_diag_dominant = false;  // a_ii > sum_j |a_ij| + tau_z, every row
  double max_offdiag = 0;               // most positive off-diagonal entry
  double min_dominance = 0;             // min over rows of (a_ii - sum |off|)
};

MatrixProperties matrix_properties(const SparseMatrix& a, double tau_z = 1e-12);

struct SolveOptions {
  double tol = 1e-10;  // terminate when |Ax-b| <= tol*|b|
  int max_iter = 5000;
  Exec exec = Exec::parallel;
  const std::vector<double>* initial_guess = nullptr;
};

struct SolveResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0;
  const char* method = "";  // "cg" or "bicgstab"
};

class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& what, double rel_residual)
      : std::runtime_error(what), relative_residual(rel_residual) {}
  double relative_residual;
};

// Jacobi-preconditioned CG for symmetric matrices, BiCGStab otherwise;
// symmetry is detected by a structural + numeric scan. Throws SolveFailure
// carrying the reached residual when max_iter is exhausted.
SolveResult solve_linear(const SparseMatrix& a, const std::vector<double>& b,
                         const SolveOptions& opts = {});

void write_matrix_market(const SparseMatrix& a, const std::string& path);

}  // namespace nagfem
