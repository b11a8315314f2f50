#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "nagfem/mesh.hpp"

using namespace nagfem;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("structured generator counts and volumes") {
  const Rect rect{-100, 100, -100, 100};
  for (const auto kind : {StructuredKind::right45, StructuredKind::right135}) {
    const Mesh m = generate_structured_mesh(kind, 20, 20, rect);
    CHECK(m.n_vertices() == 21 * 21);
    CHECK(m.n_elements() == 800);
    CHECK(m.n_interior == 19 * 19);
    CHECK(m.domain_volume() == doctest::Approx(200.0 * 200.0).epsilon(1e-12));
    validate_mesh(m);
  }

  const Mesh a = generate_structured_mesh(StructuredKind::acute8, 5, 4, Rect{0, 5, 0, 4});
  CHECK(a.n_elements() == 8 * 5 * 4);
  CHECK(a.domain_volume() == doctest::Approx(20.0).epsilon(1e-12));
  validate_mesh(a);
}

TEST_CASE("interior-first ordering holds and boundary flags match the facet rule") {
  const Mesh m = generate_structured_mesh(StructuredKind::right135, 7, 5, Rect{0, 7, 0, 5});
  for (int v = 0; v < m.n_vertices(); ++v)
    CHECK(static_cast<bool>(m.boundary[v]) == (v >= m.n_interior));
  const auto flags = detect_boundary(m.dim, m.n_vertices(), m.elems);
  for (int v = 0; v < m.n_vertices(); ++v) CHECK(flags[v] == m.boundary[v]);
}

TEST_CASE("element volumes are positive and sum to the domain volume") {
  const Mesh m = generate_structured_mesh(StructuredKind::acute8, 3, 3, Rect{-2, 1, 4, 7});
  double total = 0;
  for (int k = 0; k < m.n_elements(); ++k) {
    const double vol = m.element_volume(k);
    CHECK(vol > 0);
    total += vol;
  }
  CHECK(total == doctest::Approx(m.domain_volume()).epsilon(1e-12));
}

TEST_CASE("patches cover each vertex and patch volumes sum consistently") {
  const Mesh m = generate_structured_mesh(StructuredKind::right45, 4, 4, Rect{0, 1, 0, 1});
  double patch_total = 0;
  for (int v = 0; v < m.n_vertices(); ++v) {
    CHECK(!m.patches[v].empty());
    for (const int k : m.patches[v]) {
      bool found = false;
      for (int a = 0; a <= m.dim; ++a) found = found || m.element(k)[a] == v;
      CHECK(found);
    }
    patch_total += m.patch_volume(v);
  }
  // each element is counted once per vertex
  CHECK(patch_total == doctest::Approx(3.0 * m.domain_volume()).epsilon(1e-12));
}

TEST_CASE("acute8 pattern is acute with a reported margin") {
  MeshGenReport report;
  const Mesh m =
      generate_structured_mesh(StructuredKind::acute8, 6, 6, Rect{0, 6, 0, 6}, &report);
  CHECK(report.acute_margin_deg > 1.0);
  CHECK(report.acute_margin_deg < 45.0);
  // every dihedral angle strictly acute: verify via edge dot products
  for (int k = 0; k < m.n_elements(); ++k) {
    const int* e = m.element(k);
    for (int i = 0; i < 3; ++i) {
      const double* a = m.vertex(e[i]);
      const double* b = m.vertex(e[(i + 1) % 3]);
      const double* c = m.vertex(e[(i + 2) % 3]);
      const double dot = (b[0] - a[0]) * (c[0] - a[0]) + (b[1] - a[1]) * (c[1] - a[1]);
      CHECK(dot > 0);
    }
  }
}

TEST_CASE("save/load round-trips bit-exactly") {
  const std::string path = temp_path("nagfem_roundtrip.mesh");
  const Mesh m = generate_structured_mesh(StructuredKind::acute8, 3, 2, Rect{-1.5, 2.25, 0.1, 2.6});
  save_mesh(m, path);
  const Mesh r = load_mesh(path);
  REQUIRE(r.n_vertices() == m.n_vertices());
  REQUIRE(r.n_elements() == m.n_elements());
  CHECK(r.n_interior == m.n_interior);
  for (std::size_t i = 0; i < m.coords.size(); ++i) CHECK(r.coords[i] == m.coords[i]);
  for (std::size_t i = 0; i < m.elems.size(); ++i) CHECK(r.elems[i] == m.elems[i]);
  std::remove(path.c_str());
}

TEST_CASE("loader reports the offending line") {
  const std::string path = temp_path("nagfem_bad.mesh");

  SUBCASE("bad header") {
    write_file(path, "mesh two 3 1\n");
    CHECK_THROWS_WITH_AS(load_mesh(path), doctest::Contains("line 1"), std::invalid_argument);
  }
  SUBCASE("bad vertex line") {
    write_file(path, "mesh 2 3 1\n0 0 1\n1 zero 1\n0 1 1\n0 1 2\n");
    CHECK_THROWS_WITH_AS(load_mesh(path), doctest::Contains("line 3"), std::invalid_argument);
  }
  SUBCASE("vertex index out of range") {
    write_file(path, "mesh 2 3 1\n0 0 1\n1 0 1\n0 1 1\n0 1 7\n");
    CHECK_THROWS_AS(load_mesh(path), std::invalid_argument);
  }
  SUBCASE("truncated file") {
    write_file(path, "mesh 2 3 1\n0 0 1\n1 0 1\n");
    CHECK_THROWS_AS(load_mesh(path), std::invalid_argument);
  }
  std::remove(path.c_str());
}

TEST_CASE("loader rejects boundary flags that contradict the facet rule") {
  const std::string path = temp_path("nagfem_badflags.mesh");
  // single triangle: all three vertices lie on boundary facets, flag says otherwise
  write_file(path, "mesh 2 3 1\n0 0 1\n1 0 1\n0 1 0\n0 1 2\n");
  CHECK_THROWS_AS(load_mesh(path), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("comments and blank lines are accepted") {
  const std::string path = temp_path("nagfem_comments.mesh");
  write_file(path,
             "# header comment\nmesh 2 3 1\n\n0 0 1\n1 0 1  # inline\n0 1 1\n0 1 2\n");
  const Mesh m = load_mesh(path);
  CHECK(m.n_vertices() == 3);
  CHECK(m.n_elements() == 1);
  std::remove(path.c_str());
}

TEST_CASE("make_mesh reorders shuffled vertices interior-first") {
  // build a 3x3 grid mesh, shuffle vertex numbering, rebuild through make_mesh
  const Mesh g = generate_structured_mesh(StructuredKind::right45, 3, 3, Rect{0, 3, 0, 3});
  std::vector<int> perm(g.n_vertices());
  for (int i = 0; i < g.n_vertices(); ++i) perm[i] = i;
  std::mt19937 rng(5);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<double> coords(g.coords.size());
  for (int v = 0; v < g.n_vertices(); ++v) {
    coords[2 * perm[v]] = g.vertex(v)[0];
    coords[2 * perm[v] + 1] = g.vertex(v)[1];
  }
  std::vector<int> elems(g.elems.size());
  for (std::size_t i = 0; i < g.elems.size(); ++i) elems[i] = perm[g.elems[i]];

  const Mesh m = make_mesh(2, coords, elems);
  validate_mesh(m);
  CHECK(m.n_vertices() == g.n_vertices());
  CHECK(m.n_elements() == g.n_elements());
  CHECK(m.n_interior == g.n_interior);
  for (int k = 0; k < m.n_elements(); ++k)
    CHECK(m.element_volume(k) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("make_mesh rejects inverted elements") {
  CHECK_THROWS_AS(make_mesh(2, {0, 0, 1, 0, 0, 1}, {0, 2, 1}), std::invalid_argument);
}

TEST_CASE("generator validates its arguments") {
  CHECK_THROWS_AS(generate_structured_mesh(StructuredKind::right45, 0, 3, Rect{0, 1, 0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_structured_mesh(StructuredKind::right45, 3, 3, Rect{1, 0, 0, 1}),
                  std::invalid_argument);
  // acute8 needs near-square cells
  CHECK_THROWS_AS(generate_structured_mesh(StructuredKind::acute8, 1, 1, Rect{0, 5, 0, 1}),
                  std::invalid_argument);
}
