// Timing comparison of the serial reference kernels against the OpenMP paths.
// Usage: bench [nx] [reps]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "nagfem/experiments.hpp"
#include "nagfem/schemes.hpp"

using namespace nagfem;
using clk = std::chrono::steady_clock;

namespace {

double time_best(int reps, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clk::now();
    body();
    const double s = std::chrono::duration<double>(clk::now() - t0).count();
    if (s < best) best = s;
  }
  return best;
}

void row(const char* label, double serial_s, double parallel_s) {
  std::printf("%-28s %10.4f ms %10.4f ms %8.2fx\n", label, serial_s * 1e3, parallel_s * 1e3,
              serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  const int nx = argc > 1 ? std::atoi(argv[1]) : 320;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
  if (nx < 2 || reps < 1) {
    std::fprintf(stderr, "usage: bench [nx >= 2] [reps >= 1]\n");
    return 2;
  }

  const ProblemSpec p = builtin_problem("ex2");
  const Mesh m = generate_structured_mesh(StructuredKind::right45, nx, nx, p.rect);
  std::printf("mesh: %d vertices, %d elements; best of %d runs\n\n", m.n_vertices(),
              m.n_elements(), reps);
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  row("mass assembly",
      time_best(reps, [&] { assemble_mass(m, Exec::serial); }),
      time_best(reps, [&] { assemble_mass(m, Exec::parallel); }));

  row("stiffness assembly",
      time_best(reps, [&] { assemble_stiffness(m, p.field, Exec::serial); }),
      time_best(reps, [&] { assemble_stiffness(m, p.field, Exec::parallel); }));

  std::vector<double> u(m.n_vertices(), 0.4);
  row("reaction assembly",
      time_best(reps, [&] {
        assemble_reaction(m, u, p.rf, Treatment::im, Lumping::consistent, Exec::serial);
      }),
      time_best(reps, [&] {
        assemble_reaction(m, u, p.rf, Treatment::im, Lumping::consistent, Exec::parallel);
      }));

  row("angle scan",
      time_best(reps, [&] { angle_condition(m, p.field, Exec::serial); }),
      time_best(reps, [&] { angle_condition(m, p.field, Exec::parallel); }));

  const SparseMatrix a = assemble_stiffness(m, p.field);
  std::vector<double> x(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) x[i] = 0.1 + 0.8 * ((i * 2654435761u) % 1024) / 1024.0;
  std::vector<double> y(m.n_vertices());
  row("stiffness matvec",
      time_best(reps * 10, [&] { a.matvec(x.data(), y.data(), Exec::serial); }),
      time_best(reps * 10, [&] { a.matvec(x.data(), y.data(), Exec::parallel); }));

  SchemeConfig cfg;
  cfg.treatment = Treatment::im;
  cfg.dt = 0.1;
  const StepMatrices sm = step_matrices(m, p.field, u, cfg, cfg.dt);
  const std::vector<double> b = sm.rhs.apply(u);
  SolveOptions so;
  so.exec = Exec::serial;
  const double s_solve = time_best(reps, [&] { solve_linear(sm.lhs, b, so); });
  so.exec = Exec::parallel;
  const double p_solve = time_best(reps, [&] { solve_linear(sm.lhs, b, so); });
  row("implicit step solve", s_solve, p_solve);

  row("state l2 distance",
      time_best(reps, [&] { scaled_l2_difference(m, x, u, Exec::serial); }),
      time_best(reps, [&] { scaled_l2_difference(m, x, u, Exec::parallel); }));

  return 0;
}
