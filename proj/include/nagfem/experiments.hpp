#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "nagfem/assembly.hpp"
#include "nagfem/geometry.hpp"
#include "nagfem/mesh.hpp"
#include "nagfem/schemes.hpp"

namespace nagfem {

struct ProblemSpec {
  std::string name;
  Rect rect;
  DiffusionField field;
  ReactionFunction rf = ReactionFunction::nagumo(0.1);
  ScalarTimeFunction g;   // boundary data
  ScalarTimeFunction u0;  // initial data (time argument ignored)
  double default_T = 10.0;
  bool has_exact = false;
  ScalarTimeFunction exact;
};

// Traveling front e^z/(e^z + 2) with z = 0.5(x + y) + 0.4t, evaluated in an
// overflow-safe form on both tails.
double exact_solution_ex1(double x, double y, double t);

// "ex1": identity. "ex2": constant anisotropic tensor with eigenvalues
// {200, 1}, principal axis at 60 degrees. "ex3": eigenvalues {200, 1} with the
// large axis tangential to circles around the origin (at the origin itself the
// tangential angle is fixed to pi/2).
Tensor builtin_diffusion(const std::string& name, double x, double y);

ProblemSpec builtin_problem(const std::string& name);  // "ex1", "ex2", "ex3"

// (1/sqrt(|domain|)) L2 distance between the FE function and a reference
// function, element integrals by a degree-5 quadrature. 2D meshes only.
double scaled_l2_error(const Mesh& m, const std::vector<double>& u_h,
                       const ScalarTimeFunction& exact, double t, Exec exec = Exec::parallel);

// Same norm for the difference of two nodal fields on one mesh, integrated
// exactly.
double scaled_l2_difference(const Mesh& m, const std::vector<double>& u,
                            const std::vector<double>& v, Exec exec = Exec::parallel);

SimulationSummary run_problem(const ProblemSpec& p, const Mesh& m, const SchemeConfig& cfg,
                              double T);

enum class ConvergenceMode { time, space };
const char* name(ConvergenceMode m);
ConvergenceMode parse_convergence_mode(const std::string& s);  // "time"/"space"

struct ConvergenceRow {
  double param = 0;  // time mode: dt; space mode: cell size h
  double error = 0;
  double rate = std::numeric_limits<double>::quiet_NaN();  // log2(e_prev/e), halved param
};

struct ConvergenceTable {
  ConvergenceMode mode = ConvergenceMode::time;
  std::vector<ConvergenceRow> rows;
  double observed_rate() const;  // rate at the finest level
};

struct ConvergenceOptions {
  ConvergenceMode mode = ConvergenceMode::time;
  int levels = 4;
  double T = 10.0;
  // time mode: coarsest step, halved per level; space mode: the fixed step
  double dt0 = 0.5;
  // time mode: the fixed mesh; space mode: coarsest mesh, doubled per level
  int nx0 = 100, ny0 = 100;
  StructuredKind kind = StructuredKind::right45;
  // time mode measures against a trajectory at dt_finest / this factor
  int reference_refinement = 16;
};

// Time mode compares against a small-step reference trajectory on the same
// mesh, space mode against the exact solution (required).
ConvergenceTable convergence_study(const ProblemSpec& p, const SchemeConfig& cfg,
                                   const ConvergenceOptions& opt);

void write_convergence_csv(const ConvergenceTable& t, std::ostream& out);
void write_convergence_csv(const ConvergenceTable& t, const std::string& path);

// x, y, u rows for every vertex.
void write_solution_csv(const Mesh& m, const std::vector<double>& u, const std::string& path);

// Rasterized field; cells with values outside [0, 1] are left white. 2D only.
void write_heatmap_ppm(const Mesh& m, const std::vector<double>& u, int width,
                       const std::string& path);
void write_heatmap_svg(const Mesh& m, const std::vector<double>& u, const std::string& path);

}  // namespace nagfem
