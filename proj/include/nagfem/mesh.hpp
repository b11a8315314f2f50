#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nagfem/parallel.hpp"

namespace nagfem {

// Simplicial mesh with interior-first vertex numbering: vertices
// [0, n_interior) are interior, [n_interior, n_vertices) lie on the boundary.
struct Mesh {
  int dim = 2;
  std::vector<double> coords;             // n_vertices * dim
  std::vector<int> elems;                 // n_elements * (dim + 1), positive orientation
  std::vector<std::uint8_t> boundary;     // per vertex, 1 = boundary
  int n_interior = 0;
  std::vector<std::vector<int>> patches;  // elements incident to each vertex

  int n_vertices() const { return static_cast<int>(boundary.size()); }
  int n_elements() const { return static_cast<int>(elems.size()) / (dim + 1); }
  const double* vertex(int v) const { return coords.data() + static_cast<std::size_t>(v) * dim; }
  const int* element(int k) const { return elems.data() + static_cast<std::size_t>(k) * (dim + 1); }

  double element_volume(int k) const;
  double domain_volume() const;
  double patch_volume(int v) const;  // sum of |K| over elements touching v
};

// Validates connectivity, orientation, boundary flags (against the facet rule)
// and interior-first ordering; throws std::invalid_argument on violation.
void validate_mesh(const Mesh& m);

// Boundary detection: a vertex is boundary iff it lies on a facet shared by
// exactly one element.
std::vector<std::uint8_t> detect_boundary(int dim, std::size_t n_vertices,
                                          const std::vector<int>& elems);

// Returns a mesh satisfying the interior-first invariant; perm (if given)
// receives the vertex permutation with perm[old_index] = new_index.
Mesh reorder_interior_first(const Mesh& m, std::vector<int>* perm = nullptr);

struct Rect {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

enum class StructuredKind { right45, right135, acute8 };

struct MeshGenReport {
  // acute8 only: min over elements of (90 deg - largest Euclidean angle)
  double acute_margin_deg = 0.0;
};

// nx-by-ny grid of cells over rect; right45/right135 split each cell into two
// right triangles (hypotenuse along the rising / falling diagonal), acute8
// into eight acute triangles. All elements positively oriented, interior-first
// ordering applied.
Mesh generate_structured_mesh(StructuredKind kind, int nx, int ny, const Rect& rect,
                              MeshGenReport* report = nullptr);

// Plain-text format: "mesh <dim> <n_vertices> <n_elements>" header, one vertex
// line per vertex ("x y b" with b the boundary flag), one element line with
// dim+1 zero-based vertex indices. '#' starts a comment. Coordinates are
// written with 17 significant digits so save/load round-trips bit-exactly.
Mesh load_mesh(const std::string& path);
void save_mesh(const Mesh& m, const std::string& path);

// Assembles a Mesh from raw arrays: detects/validates boundary flags, checks
// orientation, reorders interior-first, builds patches.
Mesh make_mesh(int dim, std::vector<double> coords, std::vector<int> elems,
               std::vector<std::uint8_t> boundary_flags = {});

}  // namespace nagfem
