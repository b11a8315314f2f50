#include "nagfem/assembly.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace nagfem {

ReactionFunction ReactionFunction::nagumo(double a) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("reaction: Nagumo parameter must lie in (0, 1)");
  ReactionFunction rf;
  rf.f_ = [a](double u) { return (1.0 - u) * (u - a); };
  rf.df_ = [a](double u) { return -2.0 * u + 1.0 + a; };
  rf.is_nagumo_ = true;
  rf.a_ = a;
  return rf;
}

ReactionFunction ReactionFunction::custom(std::function<double(double)> f,
                                          std::function<double(double)> fprime) {
  if (!f || !fprime) throw std::invalid_argument("reaction: null function");
  const double h = 1e-5;
  for (int i = 0; i <= 80; ++i) {
    const double u = -2.0 + 4.0 * i / 80.0;
    const double fd = (f(u + h) - f(u - h)) / (2.0 * h);
    const double d = fprime(u);
    if (std::abs(d - fd) > 1e-6 * std::max({1.0, std::abs(d), std::abs(fd)}))
      throw std::invalid_argument("reaction: fprime disagrees with finite differences of f near u=" +
                                  std::to_string(u));
  }
  ReactionFunction rf;
  rf.f_ = std::move(f);
  rf.df_ = std::move(fprime);
  return rf;
}

double ReactionFunction::nagumo_a() const {
  if (!is_nagumo_) throw std::logic_error("reaction: not a Nagumo preset");
  return a_;
}

const char* name(Treatment t) {
  switch (t) {
    case Treatment::em: return "em";
    case Treatment::im: return "im";
    case Treatment::heim1: return "heim1";
    case Treatment::heim2: return "heim2";
  }
  return "?";
}

const char* name(Lumping l) { return l == Lumping::consistent ? "consistent" : "lumped"; }

Treatment parse_treatment(const std::string& s) {
  if (s == "em") return Treatment::em;
  if (s == "im") return Treatment::im;
  if (s == "heim1") return Treatment::heim1;
  if (s == "heim2") return Treatment::heim2;
  throw std::invalid_argument("unknown treatment '" + s + "' (expected em, im, heim1, heim2)");
}

Lumping parse_lumping(const std::string& s) {
  if (s == "consistent") return Lumping::consistent;
  if (s == "lumped") return Lumping::lumped;
  throw std::invalid_argument("unknown lumping mode '" + s + "' (expected consistent, lumped)");
}

namespace {

double factorial(int n) {
  double r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// int_K prod phi_i^{alpha_i} = |K| d! prod(alpha_i!) / (d + sum alpha_i)!
struct TripleCoeffs {
  double all_same;   // a == b == c
  double one_pair;   // exactly two equal
  double distinct;   // all different
  explicit TripleCoeffs(int d)
      : all_same(factorial(d) * 6.0 / factorial(d + 3)),
        one_pair(factorial(d) * 2.0 / factorial(d + 3)),
        distinct(factorial(d) * 1.0 / factorial(d + 3)) {}
};

// Fills one local matrix per element in parallel, then merges them in element
// order so the result is independent of the thread count. Rows of boundary
// vertices are dropped; identity rows are appended where requested.
template <class LocalFn>
SparseMatrix assemble_cells(const Mesh& m, bool boundary_identity, Exec exec, LocalFn&& local) {
  const int ne = m.n_elements();
  const int nloc = m.dim + 1;
  std::vector<double> locals(static_cast<std::size_t>(ne) * nloc * nloc);
  kernels::parallel_for(ne, exec,
                        [&](std::size_t k) { local(static_cast<int>(k), &locals[k * nloc * nloc]); });

  const int nv = m.n_vertices();
  SparseMatrix out(nv, nv);
  out.reserve(locals.size() + (nv - m.n_interior));
  for (int k = 0; k < ne; ++k) {
    const int* vtx = m.element(k);
    const double* loc = &locals[static_cast<std::size_t>(k) * nloc * nloc];
    for (int a = 0; a < nloc; ++a) {
      const int row = vtx[a];
      if (row >= m.n_interior) continue;
      for (int b = 0; b < nloc; ++b) out.add(row, vtx[b], loc[a * nloc + b]);
    }
  }
  if (boundary_identity)
    for (int i = m.n_interior; i < nv; ++i) out.add(i, i, 1.0);
  out.compress();
  return out;
}

}  // namespace

double basis_triple_product(int dim, int a, int b, int c) {
  const TripleCoeffs tc(dim);
  if (a == b && b == c) return tc.all_same;
  if (a == b || b == c || a == c) return tc.one_pair;
  return tc.distinct;
}

SparseMatrix assemble_mass(const Mesh& m, Exec exec) {
  const int nloc = m.dim + 1;
  const double denom = (m.dim + 1.0) * (m.dim + 2.0);
  return assemble_cells(m, false, exec, [&](int k, double* loc) {
    const double vol = m.element_volume(k);
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b) loc[a * nloc + b] = vol * (a == b ? 2.0 : 1.0) / denom;
  });
}

std::vector<double> assemble_lumped_mass(const Mesh& m, Exec exec) {
  std::vector<double> d(m.n_vertices(), 0.0);
  kernels::parallel_for(m.n_interior, exec,
                        [&](std::size_t i) { d[i] = m.patch_volume(static_cast<int>(i)) / (m.dim + 1); });
  return d;
}

SparseMatrix assemble_stiffness(const Mesh& m, const DiffusionField& field, Exec exec) {
  if (field.dim != m.dim) throw std::invalid_argument("stiffness: field/mesh dimension mismatch");
  const int nloc = m.dim + 1;
  std::atomic<int> bad{-1};
  SparseMatrix a = assemble_cells(m, true, exec, [&](int k, double* loc) {
    const Tensor dk = field.element_value(m, k);
    if (!dk.spd()) {
      int expected = -1;
      bad.compare_exchange_strong(expected, k);
      std::fill(loc, loc + nloc * nloc, 0.0);
      return;
    }
    const ElementGeometry g = element_geometry(m, k);
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) loc[i * nloc + j] = g.volume * dk.quad(g.q[i], g.q[j]);
  });
  if (bad.load() >= 0)
    throw std::invalid_argument("stiffness: diffusion tensor is not SPD on element " +
                                std::to_string(bad.load()));
  return a;
}

SparseMatrix assemble_weighted_mass(const Mesh& m, const std::vector<double>& weight, Exec exec) {
  if (static_cast<int>(weight.size()) != m.n_vertices())
    throw std::invalid_argument("weighted mass: weight length mismatch");
  const int nloc = m.dim + 1;
  const TripleCoeffs tc(m.dim);
  return assemble_cells(m, false, exec, [&](int k, double* loc) {
    const double vol = m.element_volume(k);
    const int* vtx = m.element(k);
    double w[4], s = 0;
    for (int c = 0; c < nloc; ++c) s += w[c] = weight[vtx[c]];
    for (int a = 0; a < nloc; ++a) {
      loc[a * nloc + a] = vol * (w[a] * tc.all_same + (s - w[a]) * tc.one_pair);
      for (int b = a + 1; b < nloc; ++b) {
        const double v = vol * ((w[a] + w[b]) * tc.one_pair + (s - w[a] - w[b]) * tc.distinct);
        loc[a * nloc + b] = v;
        loc[b * nloc + a] = v;
      }
    }
  });
}

ReactionMatrices assemble_reaction(const Mesh& m, const std::vector<double>& u_n,
                                   const ReactionFunction& rf, Treatment treatment,
                                   Lumping lumping, Exec exec) {
  const int nv = m.n_vertices();
  if (static_cast<int>(u_n.size()) != nv)
    throw std::invalid_argument("reaction assembly: state length mismatch");

  std::vector<double> wb, wc;
  switch (treatment) {
    case Treatment::em:
      wc.resize(nv);
      kernels::parallel_for(nv, exec, [&](std::size_t i) { wc[i] = rf.f(u_n[i]); });
      break;
    case Treatment::im:
      wb.resize(nv);
      wc.resize(nv);
      kernels::parallel_for(nv, exec, [&](std::size_t i) {
        const double fu = rf.f(u_n[i]), dfu = rf.df(u_n[i]);
        wb[i] = fu + u_n[i] * dfu;
        wc[i] = -u_n[i] * dfu;
      });
      break;
    case Treatment::heim1:
      wb.resize(nv);
      kernels::parallel_for(nv, exec, [&](std::size_t i) { wb[i] = rf.f(u_n[i]); });
      break;
    case Treatment::heim2:
      wb.resize(nv);
      wc.resize(nv);
      kernels::parallel_for(nv, exec, [&](std::size_t i) {
        const double fu = rf.f(u_n[i]);
        wb[i] = std::min(fu, 0.0);
        wc[i] = std::max(fu, 0.0);
      });
      break;
  }

  ReactionMatrices out;
  if (lumping == Lumping::consistent) {
    if (!wb.empty()) out.b = assemble_weighted_mass(m, wb, exec);
    if (!wc.empty()) out.c = assemble_weighted_mass(m, wc, exec);
  } else {
    const std::vector<double> mbar = assemble_lumped_mass(m, exec);
    auto scaled_diag = [&](const std::vector<double>& w) {
      std::vector<double> d(nv);
      kernels::parallel_for(nv, exec, [&](std::size_t i) { d[i] = mbar[i] * w[i]; });
      return diagonal_matrix(d);
    };
    if (!wb.empty()) out.b = scaled_diag(wb);
    if (!wc.empty()) out.c = scaled_diag(wc);
  }
  return out;
}

std::vector<double> boundary_vector(const Mesh& m, const ScalarTimeFunction& g, double t) {
  if (!g) throw std::invalid_argument("boundary vector: null boundary function");
  std::vector<double> v(m.n_vertices(), 0.0);
  for (int i = m.n_interior; i < m.n_vertices(); ++i) v[i] = g(m.vertex(i), t);
  return v;
}

SparseMatrix diagonal_matrix(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  SparseMatrix a(n, n);
  a.reserve(n);
  for (int i = 0; i < n; ++i)
    if (d[i] != 0.0) a.add(i, i, d[i]);
  a.compress();
  return a;
}

}  // namespace nagfem
