#include "nagfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

namespace nagfem {

void SparseMatrix::reserve(std::size_t n) {
  ti_.reserve(n);
  tj_.reserve(n);
  tv_.reserve(n);
}

void SparseMatrix::add(int i, int j, double v) {
  if (compressed_) throw std::logic_error("sparse: add() after compress()");
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw std::out_of_range("sparse: triplet index out of range");
  ti_.push_back(i);
  tj_.push_back(j);
  tv_.push_back(v);
}

void SparseMatrix::compress() {
  if (compressed_) return;
  const std::size_t nt = ti_.size();
  std::vector<int> count(rows_ + 1, 0);
  for (std::size_t t = 0; t < nt; ++t) ++count[ti_[t] + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());

  std::vector<int> cj(nt);
  std::vector<double> cv(nt);
  {
    std::vector<int> cursor(count.begin(), count.end() - 1);
    for (std::size_t t = 0; t < nt; ++t) {
      const int pos = cursor[ti_[t]]++;
      cj[pos] = tj_[t];
      cv[pos] = tv_[t];
    }
  }

  row_ptr_.assign(rows_ + 1, 0);
  col_.clear();
  val_.clear();
  col_.reserve(nt);
  val_.reserve(nt);
  std::vector<int> order;
  for (int i = 0; i < rows_; ++i) {
    const int lo = count[i], hi = count[i + 1];
    order.resize(hi - lo);
    std::iota(order.begin(), order.end(), lo);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return cj[a] < cj[b]; });
    const std::size_t row_start = col_.size();
    for (std::size_t t = 0; t < order.size(); ++t) {
      const int j = cj[order[t]];
      if (col_.size() > row_start && col_.back() == j) {
        val_.back() += cv[order[t]];
      } else {
        col_.push_back(j);
        val_.push_back(cv[order[t]]);
      }
    }
    row_ptr_[i + 1] = static_cast<int>(col_.size());
  }
  ti_.clear();
  ti_.shrink_to_fit();
  tj_.clear();
  tj_.shrink_to_fit();
  tv_.clear();
  tv_.shrink_to_fit();
  compressed_ = true;
}

double SparseMatrix::coeff(int i, int j) const {
  if (!compressed_) throw std::logic_error("sparse: coeff() requires compress()");
  for (int t = row_ptr_[i]; t < row_ptr_[i + 1]; ++t)
    if (col_[t] == j) return val_[t];
  return 0.0;
}

void SparseMatrix::matvec(const double* x, double* y, Exec exec) const {
  if (!compressed_) throw std::logic_error("sparse: matvec() requires compress()");
  kernels::parallel_for(rows_, exec, [&](std::size_t i) {
    double s = 0.0;
    for (int t = row_ptr_[i]; t < row_ptr_[i + 1]; ++t) s += val_[t] * x[col_[t]];
    y[i] = s;
  });
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& x, Exec exec) const {
  if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("sparse: size mismatch");
  std::vector<double> y(rows_);
  matvec(x.data(), y.data(), exec);
  return y;
}

SparseMatrix add_scaled(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
  if (!a.compressed() || !b.compressed())
    throw std::logic_error("sparse: add_scaled() requires compressed inputs");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("sparse: shape mismatch");
  SparseMatrix c(a.rows(), a.cols());
  std::vector<int> row_ptr(a.rows() + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  col.reserve(a.nnz() + b.nnz());
  val.reserve(a.nnz() + b.nnz());
  for (int i = 0; i < a.rows(); ++i) {
    int ta = a.row_ptr()[i], tb = b.row_ptr()[i];
    const int ea = a.row_ptr()[i + 1], eb = b.row_ptr()[i + 1];
    while (ta < ea || tb < eb) {
      const int ja = ta < ea ? a.col()[ta] : a.cols();
      const int jb = tb < eb ? b.col()[tb] : b.cols();
      if (ja < jb) {
        col.push_back(ja);
        val.push_back(alpha * a.val()[ta++]);
      } else if (jb < ja) {
        col.push_back(jb);
        val.push_back(beta * b.val()[tb++]);
      } else {
        col.push_back(ja);
        val.push_back(alpha * a.val()[ta++] + beta * b.val()[tb++]);
      }
    }
    row_ptr[i + 1] = static_cast<int>(col.size());
  }
  // rebuild through the staging interface to keep a single construction path
  c.reserve(col.size());
  for (int i = 0; i < a.rows(); ++i)
    for (int t = row_ptr[i]; t < row_ptr[i + 1]; ++t) c.add(i, col[t], val[t]);
  c.compress();
  return c;
}

SparseMatrix add_diagonal(const SparseMatrix& a, const std::vector<double>& d, double scale) {
  if (!a.compressed()) throw std::logic_error("sparse: add_diagonal() requires compressed input");
  if (static_cast<int>(d.size()) != a.rows())
    throw std::invalid_argument("sparse: diagonal size mismatch");
  SparseMatrix c(a.rows(), a.cols());
  c.reserve(a.nnz() + d.size());
  for (int i = 0; i < a.rows(); ++i) {
    bool seen = false;
    for (int t = a.row_ptr()[i]; t < a.row_ptr()[i + 1]; ++t) {
      double v = a.val()[t];
      if (a.col()[t] == i) {
        v += scale * d[i];
        seen = true;
      }
      c.add(i, a.col()[t], v);
    }
    if (!seen && scale * d[i] != 0.0) c.add(i, i, scale * d[i]);
  }
  c.compress();
  return c;
}

bool is_symmetric(const SparseMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  // transpose by counting sort
  const int n = a.rows();
  std::vector<int> tp(n + 1, 0);
  for (std::size_t t = 0; t < a.nnz(); ++t) ++tp[a.col()[t] + 1];
  std::partial_sum(tp.begin(), tp.end(), tp.begin());
  std::vector<int> tcol(a.nnz());
  std::vector<double> tval(a.nnz());
  {
    std::vector<int> cursor(tp.begin(), tp.end() - 1);
    for (int i = 0; i < n; ++i)
      for (int t = a.row_ptr()[i]; t < a.row_ptr()[i + 1]; ++t) {
        const int pos = cursor[a.col()[t]]++;
        tcol[pos] = i;
        tval[pos] = a.val()[t];
      }
  }
  double amax = 0.0;
  for (double v : a.val()) amax = std::max(amax, std::abs(v));
  const double tol = rel_tol * (amax > 0 ? amax : 1.0);
  for (int i = 0; i < n; ++i) {
    int ta = a.row_ptr()[i], tb = tp[i];
    const int ea = a.row_ptr()[i + 1], eb = tp[i + 1];
    while (ta < ea || tb < eb) {
      const int ja = ta < ea ? a.col()[ta] : n;
      const int jb = tb < eb ? tcol[tb] : n;
      if (ja < jb) {
        if (std::abs(a.val()[ta++]) > tol) return false;
      } else if (jb < ja) {
        if (std::abs(tval[tb++]) > tol) return false;
      } else {
        if (std::abs(a.val()[ta++] - tval[tb++]) > tol) return false;
      }
    }
  }
  return true;
}

MatrixProperties matrix_properties(const SparseMatrix& a, double tau_z) {
  if (!a.compressed()) throw std::logic_error("sparse: matrix_properties() requires compress()");
  MatrixProperties p;
  double max_off = -std::numeric_limits<double>::infinity();
  double min_dom = std::numeric_limits<double>::infinity();
  bool any_off = false;
  for (int i = 0; i < a.rows(); ++i) {
    double diag = 0.0, off_abs = 0.0;
    for (int t = a.row_ptr()[i]; t < a.row_ptr()[i + 1]; ++t) {
      const double v = a.val()[t];
      if (a.col()[t] == i) {
        diag = v;
      } else {
        off_abs += std::abs(v);
        max_off = std::max(max_off, v);
        any_off = true;
      }
    }
    min_dom = std::min(min_dom, diag - off_abs);
  }
  p.max_offdiag = any_off ? max_off : 0.0;
  p.min_dominance = a.rows() > 0 ? min_dom : 0.0;
  p.z_matrix = p.max_offdiag <= tau_z;
  p.strictly_diag_dominant = p.min_dominance > tau_z;
  return p;
}

namespace {

double norm2(const std::vector<double>& v, Exec exec) {
  return std::sqrt(kernels::dot(v, v, exec));
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> jacobi_diag(const SparseMatrix& a) {
  std::vector<double> d(a.rows(), 1.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double v = a.coeff(i, i);
    if (v != 0.0) d[i] = 1.0 / v;
  }
  return d;
}

double true_residual(const SparseMatrix& a, const std::vector<double>& b,
                     const std::vector<double>& x, Exec exec) {
  std::vector<double> r(b.size());
  a.matvec(x.data(), r.data(), exec);
  kernels::parallel_for(r.size(), exec, [&](std::size_t i) { r[i] = b[i] - r[i]; });
  return norm2(r, exec);
}

std::vector<double> start_vector(const SparseMatrix& a, const std::vector<double>& b,
                                 const SolveOptions& o, std::vector<double>& r) {
  std::vector<double> x;
  if (o.initial_guess && o.initial_guess->size() == b.size()) {
    x = *o.initial_guess;
    r.resize(b.size());
    a.matvec(x.data(), r.data(), o.exec);
    kernels::parallel_for(b.size(), o.exec, [&](std::size_t i) { r[i] = b[i] - r[i]; });
  } else {
    x.assign(b.size(), 0.0);
    r = b;
  }
  return x;
}

SolveResult cg(const SparseMatrix& a, const std::vector<double>& b, const SolveOptions& o,
               double bnorm) {
  const std::size_t n = b.size();
  const Exec ex = o.exec;
  const auto prec = jacobi_diag(a);
  std::vector<double> r, z(n), p(n), q(n);
  std::vector<double> x = start_vector(a, b, o, r);
  SolveResult res;
  res.method = "cg";
  if (const double rn = norm2(r, ex); rn <= o.tol * bnorm) {
    res.x = std::move(x);
    res.relative_residual = rn / bnorm;
    return res;
  }
  kernels::parallel_for(n, ex, [&](std::size_t i) { z[i] = prec[i] * r[i]; });
  p = z;
  double rz = kernels::dot(r, z, ex);
  for (int it = 1; it <= o.max_iter; ++it) {
    a.matvec(p.data(), q.data(), ex);
    const double pq = kernels::dot(p, q, ex);
    if (pq == 0.0) break;
    const double alpha = rz / pq;
    kernels::parallel_for(n, ex, [&](std::size_t i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    });
    res.iterations = it;
    if (norm2(r, ex) <= o.tol * bnorm) {
      const double tr = true_residual(a, b, x, ex);
      if (tr <= o.tol * bnorm) {
        res.x = std::move(x);
        res.relative_residual = tr / bnorm;
        return res;
      }
    }
    kernels::parallel_for(n, ex, [&](std::size_t i) { z[i] = prec[i] * r[i]; });
    const double rz_new = kernels::dot(r, z, ex);
    const double beta = rz_new / rz;
    rz = rz_new;
    kernels::parallel_for(n, ex, [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
  }
  const double tr = true_residual(a, b, x, ex);
  if (tr <= o.tol * bnorm) {
    res.x = std::move(x);
    res.relative_residual = tr / bnorm;
    return res;
  }
  throw SolveFailure("sparse: cg failed to reach tolerance " + fmt_g(o.tol) + " in " +
                         std::to_string(o.max_iter) + " iterations (relative residual " +
                         fmt_g(tr / bnorm) + ")",
                     tr / bnorm);
}

SolveResult bicgstab(const SparseMatrix& a, const std::vector<double>& b, const SolveOptions& o,
                     double bnorm) {
  const std::size_t n = b.size();
  const Exec ex = o.exec;
  const auto prec = jacobi_diag(a);
  std::vector<double> r;
  std::vector<double> x = start_vector(a, b, o, r);
  SolveResult res;
  res.method = "bicgstab";
  if (const double rn = norm2(r, ex); rn <= o.tol * bnorm) {
    res.x = std::move(x);
    res.relative_residual = rn / bnorm;
    return res;
  }
  std::vector<double> r0 = r;
  std::vector<double> p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= o.max_iter; ++it) {
    double rho_new = kernels::dot(r0, r, ex);
    if (std::abs(rho_new) < 1e-300) {  // restart with the current residual
      r0 = r;
      rho_new = kernels::dot(r, r, ex);
      if (rho_new == 0.0) break;  // exact solution reached
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    kernels::parallel_for(n, ex, [&](std::size_t i) { p[i] = r[i] + beta * (p[i] - omega * v[i]); });
    kernels::parallel_for(n, ex, [&](std::size_t i) { phat[i] = prec[i] * p[i]; });
    a.matvec(phat.data(), v.data(), ex);
    const double r0v = kernels::dot(r0, v, ex);
    if (r0v == 0.0) throw SolveFailure("sparse: bicgstab breakdown", norm2(r, ex) / bnorm);
    alpha = rho / r0v;
    kernels::parallel_for(n, ex, [&](std::size_t i) { s[i] = r[i] - alpha * v[i]; });
    res.iterations = it;
    if (norm2(s, ex) <= o.tol * bnorm) {
      kernels::parallel_for(n, ex, [&](std::size_t i) { x[i] += alpha * phat[i]; });
      const double tr = true_residual(a, b, x, ex);
      if (tr <= o.tol * bnorm) {
        res.x = std::move(x);
        res.relative_residual = tr / bnorm;
        return res;
      }
      r = s;
      continue;
    }
    kernels::parallel_for(n, ex, [&](std::size_t i) { shat[i] = prec[i] * s[i]; });
    a.matvec(shat.data(), t.data(), ex);
    const double tt = kernels::dot(t, t, ex);
    if (tt == 0.0) throw SolveFailure("sparse: bicgstab breakdown", norm2(s, ex) / bnorm);
    omega = kernels::dot(t, s, ex) / tt;
    if (omega == 0.0) throw SolveFailure("sparse: bicgstab stagnation", norm2(s, ex) / bnorm);
    kernels::parallel_for(n, ex, [&](std::size_t i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    });
    if (norm2(r, ex) <= o.tol * bnorm) {
      const double tr = true_residual(a, b, x, ex);
      if (tr <= o.tol * bnorm) {
        res.x = std::move(x);
        res.relative_residual = tr / bnorm;
        return res;
      }
    }
  }
  const double tr = true_residual(a, b, x, ex);
  if (tr <= o.tol * bnorm) {
    res.x = std::move(x);
    res.relative_residual = tr / bnorm;
    return res;
  }
  throw SolveFailure("sparse: bicgstab failed to reach tolerance " + fmt_g(o.tol) + " in " +
                         std::to_string(o.max_iter) + " iterations (relative residual " +
                         fmt_g(tr / bnorm) + ")",
                     tr / bnorm);
}

}  // namespace

SolveResult solve_linear(const SparseMatrix& a, const std::vector<double>& b,
                         const SolveOptions& opts) {
  if (!a.compressed()) throw std::logic_error("sparse: solve_linear() requires compress()");
  if (a.rows() != a.cols() || static_cast<int>(b.size()) != a.rows())
    throw std::invalid_argument("sparse: solve_linear() shape mismatch");
  const double bnorm = norm2(b, opts.exec);
  if (bnorm == 0.0) {
    SolveResult res;
    res.x.assign(b.size(), 0.0);
    res.method = "trivial";
    return res;
  }
  if (is_symmetric(a)) return cg(a, b, opts, bnorm);
  return bicgstab(a, b, opts, bnorm);
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  if (!a.compressed()) throw std::logic_error("sparse: write requires compress()");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("sparse: cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  char buf[64];
  for (int i = 0; i < a.rows(); ++i)
    for (int t = a.row_ptr()[i]; t < a.row_ptr()[i + 1]; ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", a.val()[t]);
      out << (i + 1) << ' ' << (a.col()[t] + 1) << ' ' << buf << '\n';
    }
}

}  // namespace nagfem
