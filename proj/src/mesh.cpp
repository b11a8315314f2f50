#include "nagfem/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace nagfem {

namespace {

double factorial(int d) { return d == 1 ? 1.0 : d == 2 ? 2.0 : 6.0; }

double edge_det(const Mesh& m, int k) {
  const int* e = m.element(k);
  const double* x0 = m.vertex(e[0]);
  if (m.dim == 1) return m.vertex(e[1])[0] - x0[0];
  if (m.dim == 2) {
    const double* x1 = m.vertex(e[1]);
    const double* x2 = m.vertex(e[2]);
    return (x1[0] - x0[0]) * (x2[1] - x0[1]) - (x2[0] - x0[0]) * (x1[1] - x0[1]);
  }
  double c[3][3];
  for (int j = 0; j < 3; ++j) {
    const double* xj = m.vertex(e[j + 1]);
    for (int r = 0; r < 3; ++r) c[r][j] = xj[r] - x0[r];
  }
  return c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) -
         c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0]) +
         c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]);
}

struct FacetHash {
  std::size_t operator()(const std::array<int, 3>& f) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : f) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

void build_patches(Mesh& m) {
  m.patches.assign(m.n_vertices(), {});
  for (int k = 0; k < m.n_elements(); ++k) {
    const int* e = m.element(k);
    for (int j = 0; j <= m.dim; ++j) m.patches[e[j]].push_back(k);
  }
}

// largest interior angle of a triangle, degrees
double max_angle_deg(const double* a, const double* b, const double* c) {
  auto ang = [](const double* p, const double* q, const double* r) {
    const double v1[2] = {q[0] - p[0], q[1] - p[1]};
    const double v2[2] = {r[0] - p[0], r[1] - p[1]};
    const double d = v1[0] * v2[0] + v1[1] * v2[1];
    const double n = std::hypot(v1[0], v1[1]) * std::hypot(v2[0], v2[1]);
    return std::acos(std::clamp(d / n, -1.0, 1.0)) * 180.0 / M_PI;
  };
  return std::max({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
}

}  // namespace

double Mesh::element_volume(int k) const { return std::abs(edge_det(*this, k)) / factorial(dim); }

double Mesh::domain_volume() const {
  double s = 0.0;
  for (int k = 0; k < n_elements(); ++k) s += element_volume(k);
  return s;
}

double Mesh::patch_volume(int v) const {
  double s = 0.0;
  for (int k : patches[v]) s += element_volume(k);
  return s;
}

std::vector<std::uint8_t> detect_boundary(int dim, std::size_t n_vertices,
                                          const std::vector<int>& elems) {
  std::unordered_map<std::array<int, 3>, int, FacetHash> count;
  const int nv_el = dim + 1;
  const std::size_t n_el = elems.size() / nv_el;
  count.reserve(n_el * nv_el);
  for (std::size_t k = 0; k < n_el; ++k) {
    const int* e = elems.data() + k * nv_el;
    for (int skip = 0; skip < nv_el; ++skip) {
      std::array<int, 3> f = {-1, -1, -1};
      int m = 0;
      for (int j = 0; j < nv_el; ++j)
        if (j != skip) f[m++] = e[j];
      std::sort(f.begin(), f.begin() + dim);
      ++count[f];
    }
  }
  std::vector<std::uint8_t> flags(n_vertices, 0);
  for (const auto& [f, c] : count) {
    if (c == 1)
      for (int j = 0; j < dim; ++j) flags[f[j]] = 1;
  }
  return flags;
}

void validate_mesh(const Mesh& m) {
  const int nv = m.n_vertices();
  if (m.dim < 1 || m.dim > 3) throw std::invalid_argument("mesh: dim must be 1, 2 or 3");
  if (m.coords.size() != static_cast<std::size_t>(nv) * m.dim)
    throw std::invalid_argument("mesh: coordinate array size mismatch");
  if (m.elems.size() % (m.dim + 1) != 0)
    throw std::invalid_argument("mesh: element array size mismatch");
  for (int v : m.elems)
    if (v < 0 || v >= nv) throw std::invalid_argument("mesh: vertex index out of range");
  for (int k = 0; k < m.n_elements(); ++k)
    if (edge_det(m, k) <= 0.0)
      throw std::invalid_argument("mesh: element " + std::to_string(k) +
                                  " has non-positive orientation");
  const auto flags = detect_boundary(m.dim, nv, m.elems);
  if (flags != m.boundary)
    throw std::invalid_argument("mesh: boundary flags inconsistent with facet incidence");
  for (int v = 0; v < nv; ++v) {
    const bool want_boundary = v >= m.n_interior;
    if (static_cast<bool>(m.boundary[v]) != want_boundary)
      throw std::invalid_argument("mesh: interior-first vertex ordering violated at vertex " +
                                  std::to_string(v));
  }
}

Mesh reorder_interior_first(const Mesh& m, std::vector<int>* perm_out) {
  const int nv = m.n_vertices();
  std::vector<int> perm(nv);
  int next_interior = 0;
  int n_interior = 0;
  for (int v = 0; v < nv; ++v)
    if (!m.boundary[v]) ++n_interior;
  int next_boundary = n_interior;
  for (int v = 0; v < nv; ++v)
    perm[v] = m.boundary[v] ? next_boundary++ : next_interior++;

  Mesh out;
  out.dim = m.dim;
  out.n_interior = n_interior;
  out.coords.resize(m.coords.size());
  out.boundary.assign(nv, 0);
  for (int v = 0; v < nv; ++v) {
    const int w = perm[v];
    for (int d = 0; d < m.dim; ++d) out.coords[static_cast<std::size_t>(w) * m.dim + d] =
        m.coords[static_cast<std::size_t>(v) * m.dim + d];
    out.boundary[w] = m.boundary[v];
  }
  out.elems.resize(m.elems.size());
  for (std::size_t i = 0; i < m.elems.size(); ++i) out.elems[i] = perm[m.elems[i]];
  build_patches(out);
  if (perm_out) *perm_out = std::move(perm);
  return out;
}

Mesh make_mesh(int dim, std::vector<double> coords, std::vector<int> elems,
               std::vector<std::uint8_t> boundary_flags) {
  Mesh raw;
  raw.dim = dim;
  raw.coords = std::move(coords);
  raw.elems = std::move(elems);
  const std::size_t nv = raw.coords.size() / dim;
  const auto detected = detect_boundary(dim, nv, raw.elems);
  if (!boundary_flags.empty() && boundary_flags != detected)
    throw std::invalid_argument("mesh: boundary flags inconsistent with facet incidence");
  raw.boundary = detected;
  raw.n_interior = 0;  // set by reorder
  Mesh m = reorder_interior_first(raw);
  validate_mesh(m);
  return m;
}

Mesh generate_structured_mesh(StructuredKind kind, int nx, int ny, const Rect& rect,
                              MeshGenReport* report) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("mesh: nx and ny must be positive");
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0))
    throw std::invalid_argument("mesh: rectangle must have positive extents");
  const double hx = rect.width() / nx;
  const double hy = rect.height() / ny;

  std::vector<double> coords;
  std::vector<int> elems;
  auto push_vertex = [&](double x, double y) {
    coords.push_back(x);
    coords.push_back(y);
  };
  auto grid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) push_vertex(rect.x0 + i * hx, rect.y0 + j * hy);

  if (kind == StructuredKind::right45 || kind == StructuredKind::right135) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int v00 = grid(i, j), v10 = grid(i + 1, j);
        const int v01 = grid(i, j + 1), v11 = grid(i + 1, j + 1);
        if (kind == StructuredKind::right45) {
          elems.insert(elems.end(), {v00, v10, v11});
          elems.insert(elems.end(), {v00, v11, v01});
        } else {
          elems.insert(elems.end(), {v00, v10, v01});
          elems.insert(elems.end(), {v10, v11, v01});
        }
      }
    return make_mesh(2, std::move(coords), std::move(elems));
  }

  // acute8: split each cell into 8 acute triangles using the midpoints of its
  // bottom/top edges and an interior pair at heights chosen for maximal angle
  // margin on square cells.
  const double pa = 0.065, py = 0.19;
  const int n_grid = (nx + 1) * (ny + 1);
  auto hmid = [&](int i, int j) { return n_grid + j * nx + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) push_vertex(rect.x0 + (i + 0.5) * hx, rect.y0 + j * hy);
  const int n_fixed = n_grid + nx * (ny + 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double cx = rect.x0 + i * hx, cy = rect.y0 + j * hy;
      const int p = n_fixed + 2 * (j * nx + i), q = p + 1;
      push_vertex(cx + (0.5 - pa) * hx, cy + py * hy);
      push_vertex(cx + (0.5 + pa) * hx, cy + py * hy);
      const int c00 = grid(i, j), c10 = grid(i + 1, j);
      const int c01 = grid(i, j + 1), c11 = grid(i + 1, j + 1);
      const int b = hmid(i, j), t = hmid(i, j + 1);
      elems.insert(elems.end(), {c01, c00, p});
      elems.insert(elems.end(), {c00, b, p});
      elems.insert(elems.end(), {b, q, p});
      elems.insert(elems.end(), {b, c10, q});
      elems.insert(elems.end(), {c10, c11, q});
      elems.insert(elems.end(), {c11, t, q});
      elems.insert(elems.end(), {t, p, q});
      elems.insert(elems.end(), {t, c01, p});
    }

  Mesh m = make_mesh(2, std::move(coords), std::move(elems));
  double margin = 90.0;
  for (int k = 0; k < m.n_elements(); ++k) {
    const int* e = m.element(k);
    margin = std::min(margin, 90.0 - max_angle_deg(m.vertex(e[0]), m.vertex(e[1]), m.vertex(e[2])));
  }
  if (margin <= 0.0)
    throw std::invalid_argument(
        "mesh: acute8 pattern loses acuteness at this cell aspect ratio; choose nx, ny so cells "
        "are close to square");
  if (report) report->acute_margin_deg = margin;
  return m;
}

void save_mesh(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("mesh: cannot open '" + path + "' for writing");
  out << "mesh " << m.dim << ' ' << m.n_vertices() << ' ' << m.n_elements() << '\n';
  char buf[64];
  for (int v = 0; v < m.n_vertices(); ++v) {
    const double* x = m.vertex(v);
    for (int d = 0; d < m.dim; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", x[d]);
      out << buf << ' ';
    }
    out << int(m.boundary[v]) << '\n';
  }
  for (int k = 0; k < m.n_elements(); ++k) {
    const int* e = m.element(k);
    for (int j = 0; j <= m.dim; ++j) out << e[j] << (j == m.dim ? '\n' : ' ');
  }
  if (!out) throw std::runtime_error("mesh: write to '" + path + "' failed");
}

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;
  std::istringstream tokens;

  explicit LineReader(std::istream& s) : in(s) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("mesh: line " + std::to_string(line_no) + ": " + what);
  }

  bool next_data_line() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      tokens.clear();
      tokens.str(line);
      return true;
    }
    return false;
  }

  template <class T>
  T get(const char* what) {
    T v;
    if (!(tokens >> v)) fail(std::string("expected ") + what);
    return v;
  }

  void end_line(const char* what) {
    std::string rest;
    if (tokens >> rest) fail(std::string("unexpected token '") + rest + "' after " + what);
  }
};

}  // namespace

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("mesh: cannot open '" + path + "'");
  LineReader r(in);

  if (!r.next_data_line()) throw std::invalid_argument("mesh: empty file '" + path + "'");
  std::string magic = r.get<std::string>("header keyword 'mesh'");
  if (magic != "mesh") r.fail("expected header keyword 'mesh'");
  const int dim = r.get<int>("dimension");
  if (dim < 1 || dim > 3) r.fail("dimension must be 1, 2 or 3");
  const long long nv = r.get<long long>("vertex count");
  const long long ne = r.get<long long>("element count");
  if (nv <= 0 || ne <= 0) r.fail("vertex and element counts must be positive");
  r.end_line("header");

  std::vector<double> coords;
  coords.reserve(nv * dim);
  std::vector<std::uint8_t> flags(nv, 0);
  for (long long v = 0; v < nv; ++v) {
    if (!r.next_data_line()) throw std::invalid_argument("mesh: unexpected end of file in vertices");
    for (int d = 0; d < dim; ++d) coords.push_back(r.get<double>("coordinate"));
    const int b = r.get<int>("boundary flag");
    if (b != 0 && b != 1) r.fail("boundary flag must be 0 or 1");
    flags[v] = static_cast<std::uint8_t>(b);
    r.end_line("vertex line");
  }

  std::vector<int> elems;
  elems.reserve(ne * (dim + 1));
  std::vector<int> elem_line(ne);
  for (long long k = 0; k < ne; ++k) {
    if (!r.next_data_line()) throw std::invalid_argument("mesh: unexpected end of file in elements");
    elem_line[k] = r.line_no;
    for (int j = 0; j <= dim; ++j) {
      const long long idx = r.get<long long>("vertex index");
      if (idx < 0 || idx >= nv)
        r.fail("vertex index " + std::to_string(idx) + " out of range [0, " + std::to_string(nv) +
               ")");
      elems.push_back(static_cast<int>(idx));
    }
    r.end_line("element line");
  }

  Mesh raw;
  raw.dim = dim;
  raw.coords = std::move(coords);
  raw.elems = std::move(elems);
  raw.boundary = flags;
  for (long long k = 0; k < ne; ++k)
    if (edge_det(raw, static_cast<int>(k)) <= 0.0)
      throw std::invalid_argument("mesh: line " + std::to_string(elem_line[k]) +
                                  ": element has non-positive orientation");
  const auto detected = detect_boundary(dim, nv, raw.elems);
  if (detected != flags)
    throw std::invalid_argument("mesh: boundary flags in '" + path +
                                "' inconsistent with facet incidence");
  Mesh m = reorder_interior_first(raw);
  validate_mesh(m);
  return m;
}

}  // namespace nagfem
