#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "nagfem/experiments.hpp"
#include "support/oracles.hpp"

using namespace nagfem;

namespace {

double fd_ex1(double x, double y, double t, int var, double h) {
  auto at = [&](double d) {
    return exact_solution_ex1(x + (var == 0 ? d : 0), y + (var == 1 ? d : 0),
                              t + (var == 2 ? d : 0));
  };
  return (at(h) - at(-h)) / (2.0 * h);
}

double fd2_ex1(double x, double y, double t, int var, double h) {
  auto at = [&](double d) {
    return exact_solution_ex1(x + (var == 0 ? d : 0), y + (var == 1 ? d : 0), t);
  };
  (void)t;
  return (at(h) - 2.0 * at(0) + at(-h)) / (h * h);
}

}  // namespace

TEST_CASE("the traveling front satisfies the equation it is solved against") {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> X(-6.0, 6.0), T(0.0, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double x = X(rng), y = X(rng), t = T(rng);
    const double u = exact_solution_ex1(x, y, t);
    const double ut = fd_ex1(x, y, t, 2, 1e-5);
    const double lap = fd2_ex1(x, y, t, 0, 1e-4) + fd2_ex1(x, y, t, 1, 1e-4);
    const double source = u * (1.0 - u) * (u - 0.1);
    CHECK(std::abs(ut - lap - source) < 1e-6);
  }
}

TEST_CASE("the front stays finite and monotone far into both tails") {
  CHECK(exact_solution_ex1(-1000.0, -1000.0, 0.0) == 0.0);
  CHECK(exact_solution_ex1(1000.0, 1000.0, 0.0) == 1.0);
  CHECK(std::isfinite(exact_solution_ex1(-700.0, -700.0, 5.0)));
  CHECK(std::isfinite(exact_solution_ex1(700.0, 700.0, 5.0)));
  double prev = -1.0;
  for (double s = -15.0; s <= 15.0; s += 0.5) {
    const double u = exact_solution_ex1(s, s, 0.0);
    CHECK(u > prev);
    CHECK(u >= 0.0);
    CHECK(u <= 1.0);
    prev = u;
  }
  // advancing time pushes the front forward
  CHECK(exact_solution_ex1(0.0, 0.0, 10.0) > exact_solution_ex1(0.0, 0.0, 0.0));
}

TEST_CASE("builtin diffusion tensors match their eigen decompositions") {
  std::mt19937 rng(62);
  std::uniform_real_distribution<double> X(-90.0, 90.0);

  const Tensor one = builtin_diffusion("ex1", X(rng), X(rng));
  CHECK(one.v[0][0] == 1.0);
  CHECK(one.v[1][1] == 1.0);
  CHECK(one.v[0][1] == 0.0);

  // constant tensor: eigenvalues {200, 1}, principal axis at 60 degrees
  const double c = 0.5, s = std::sqrt(3.0) / 2.0;
  const Tensor t2 = builtin_diffusion("ex2", X(rng), X(rng));
  CHECK(t2.v[0][0] == doctest::Approx(200.0 * c * c + s * s).epsilon(1e-14));
  CHECK(t2.v[0][1] == doctest::Approx(199.0 * c * s).epsilon(1e-14));
  CHECK(t2.v[1][1] == doctest::Approx(200.0 * s * s + c * c).epsilon(1e-14));
  CHECK(t2.v[0][1] == t2.v[1][0]);
  CHECK(t2.spd());

  // rotating tensor: large eigenvalue tangential to circles around the origin
  for (int trial = 0; trial < 30; ++trial) {
    const double x = X(rng), y = X(rng);
    if (x == 0 && y == 0) continue;
    const double r = std::hypot(x, y);
    const double tx = -y / r, ty = x / r;   // tangent
    const double rx = x / r, ry = y / r;    // radial
    const Tensor t3 = builtin_diffusion("ex3", x, y);
    CHECK(t3.v[0][0] == doctest::Approx(200.0 * tx * tx + rx * rx).epsilon(1e-12));
    CHECK(t3.v[0][1] == doctest::Approx(200.0 * tx * ty + rx * ry).epsilon(1e-12));
    CHECK(t3.v[1][1] == doctest::Approx(200.0 * ty * ty + ry * ry).epsilon(1e-12));
    CHECK(t3.spd());
    // invariants of the eigenvalue pair
    CHECK(t3.v[0][0] + t3.v[1][1] == doctest::Approx(201.0).epsilon(1e-12));
    CHECK(t3.v[0][0] * t3.v[1][1] - t3.v[0][1] * t3.v[1][0] ==
          doctest::Approx(200.0).epsilon(1e-10));
  }

  const Tensor origin = builtin_diffusion("ex3", 0.0, 0.0);
  CHECK(origin.v[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(origin.v[1][1] == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(std::abs(origin.v[0][1]) < 1e-12);

  CHECK_THROWS_AS(builtin_diffusion("ex4", 0, 0), std::invalid_argument);
}

TEST_CASE("builtin problems carry their domains and shared data") {
  const ProblemSpec p1 = builtin_problem("ex1");
  CHECK(p1.rect.x0 == -100);
  CHECK(p1.rect.x1 == 100);
  CHECK(p1.rect.y0 == -100);
  CHECK(p1.rect.y1 == 100);
  CHECK(p1.default_T == 10.0);
  CHECK(p1.has_exact);
  REQUIRE(static_cast<bool>(p1.exact));

  const ProblemSpec p2 = builtin_problem("ex2");
  CHECK(p2.rect.y0 == -170);
  CHECK(p2.rect.y1 == 170);
  CHECK(p2.default_T == 40.0);
  CHECK_FALSE(p2.has_exact);

  const ProblemSpec p3 = builtin_problem("ex3");
  CHECK(p3.rect.x0 == -100);
  CHECK(p3.default_T == 40.0);

  // all three share the traveling-front boundary and initial data
  const double pt[2] = {13.0, -41.0};
  for (const auto* p : {&p1, &p2, &p3}) {
    CHECK(p->g(pt, 7.5) == exact_solution_ex1(pt[0], pt[1], 7.5));
    CHECK(p->u0(pt, 0.0) == exact_solution_ex1(pt[0], pt[1], 0.0));
    CHECK(p->u0(pt, 99.0) == p->u0(pt, 0.0));  // time argument ignored
    CHECK(p->rf.is_nagumo());
    CHECK(p->rf.nagumo_a() == 0.1);
  }

  CHECK_THROWS_AS(builtin_problem("ex9"), std::invalid_argument);
}

TEST_CASE("the scaled error vanishes on reproduced linears") {
  const Mesh m = generate_structured_mesh(StructuredKind::right45, 6, 6, Rect{0, 1, 0, 1});
  const auto lin = [](const double* x, double) { return 0.7 * x[0] - 0.3 * x[1] + 0.1; };
  std::vector<double> u(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) u[i] = lin(m.vertex(i), 0.0);
  CHECK(scaled_l2_error(m, u, lin, 0.0) <= 1e-13);

  // |x|_{L2} on the unit square against the zero field
  const std::vector<double> zero(m.n_vertices(), 0.0);
  const double got = scaled_l2_error(m, zero, [](const double* x, double) { return x[0]; }, 0.0);
  CHECK(got == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));

  CHECK_THROWS_AS(scaled_l2_error(m, zero, ScalarTimeFunction{}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scaled_l2_error(m, std::vector<double>(3, 0.0),
                                  [](const double*, double) { return 0.0; }, 0.0),
                  std::invalid_argument);
}

TEST_CASE("the scaled difference of nodal fields is a mean-square distance") {
  const Mesh m = generate_structured_mesh(StructuredKind::right135, 5, 7, Rect{-2, 3, 0, 4});
  std::vector<double> u(m.n_vertices()), v(m.n_vertices());
  std::mt19937 rng(63);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < m.n_vertices(); ++i) {
    v[i] = U(rng);
    u[i] = v[i] + 0.25;
  }
  CHECK(scaled_l2_difference(m, u, v) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(scaled_l2_difference(m, u, u) == 0.0);
  CHECK(scaled_l2_difference(m, u, v) == doctest::Approx(scaled_l2_difference(m, v, u)));
  CHECK_THROWS_AS(scaled_l2_difference(m, u, std::vector<double>(3, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("run_problem advances the builtin setup") {
  const ProblemSpec p = builtin_problem("ex1");
  const Mesh m = generate_structured_mesh(StructuredKind::right45, 10, 10, p.rect);
  SchemeConfig cfg;
  cfg.treatment = Treatment::heim1;
  cfg.lumping = Lumping::lumped;  // the coarse grid is nonobtuse, so lump for the guarantee
  cfg.dt = 0.5;
  const SimulationSummary s = run_problem(p, m, cfg, 1.0);
  CHECK(s.steps == 2);
  CHECK(s.final_t == doctest::Approx(1.0));
  CHECK(s.final_u.size() == static_cast<std::size_t>(m.n_vertices()));
  CHECK(s.u_min >= -1e-10);
  CHECK(s.u_max <= 1.1);
}

TEST_CASE("time refinement shows first-order decay against a resolved reference") {
  const ProblemSpec p = builtin_problem("ex1");
  SchemeConfig cfg;
  cfg.treatment = Treatment::em;
  ConvergenceOptions opt;
  opt.mode = ConvergenceMode::time;
  opt.levels = 3;
  opt.dt0 = 0.4;
  opt.T = 1.6;
  opt.nx0 = opt.ny0 = 8;
  const ConvergenceTable table = convergence_study(p, cfg, opt);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0].param == doctest::Approx(0.4));
  CHECK(table.rows[1].param == doctest::Approx(0.2));
  CHECK(table.rows[2].param == doctest::Approx(0.1));
  CHECK(std::isnan(table.rows[0].rate));
  CHECK(table.rows[1].error < table.rows[0].error);
  CHECK(table.rows[2].error < table.rows[1].error);
  CHECK(table.observed_rate() == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("convergence study validation") {
  const ProblemSpec p1 = builtin_problem("ex1");
  SchemeConfig cfg;
  ConvergenceOptions opt;
  opt.levels = 1;
  CHECK_THROWS_WITH_AS(convergence_study(p1, cfg, opt), doctest::Contains("need >= 2 levels"),
                       std::invalid_argument);
  opt.levels = 2;
  opt.mode = ConvergenceMode::space;
  const ProblemSpec p2 = builtin_problem("ex2");
  CHECK_THROWS_AS(convergence_study(p2, cfg, opt), std::invalid_argument);

  CHECK(parse_convergence_mode("time") == ConvergenceMode::time);
  CHECK(parse_convergence_mode("space") == ConvergenceMode::space);
  CHECK_THROWS_AS(parse_convergence_mode("mesh"), std::invalid_argument);
  CHECK(std::string(name(ConvergenceMode::time)) == "time");
  CHECK(std::string(name(ConvergenceMode::space)) == "space");
}

TEST_CASE("convergence csv labels the refined parameter") {
  ConvergenceTable t;
  t.mode = ConvergenceMode::time;
  t.rows.push_back({0.5, 0.1, std::numeric_limits<double>::quiet_NaN()});
  t.rows.push_back({0.25, 0.05, 1.0});
  std::ostringstream out;
  write_convergence_csv(t, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "dt,error,rate");
  std::getline(in, line);
  CHECK(line.substr(0, 4) == "0.5,");
  t.mode = ConvergenceMode::space;
  std::ostringstream out2;
  write_convergence_csv(t, out2);
  CHECK(out2.str().substr(0, 13) == "h,error,rate\n");
}

TEST_CASE("solution writers produce their formats") {
  const Mesh m = generate_structured_mesh(StructuredKind::right45, 4, 4, Rect{0, 1, 0, 1});
  std::vector<double> u(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) u[i] = 0.5 + 0.4 * std::sin(3.0 * m.vertex(i)[0]);

  const std::string csv = "/tmp/nagfem_sol_test.csv";
  write_solution_csv(m, u, csv);
  std::ifstream cin(csv);
  std::string line;
  std::getline(cin, line);
  CHECK(line == "x,y,u");
  int rows = 0;
  while (std::getline(cin, line))
    if (!line.empty()) ++rows;
  CHECK(rows == m.n_vertices());

  const std::string ppm = "/tmp/nagfem_heat_test.ppm";
  write_heatmap_ppm(m, u, 40, ppm);
  std::ifstream pin(ppm, std::ios::binary);
  std::string magic;
  pin >> magic;
  CHECK(magic == "P6");
  int w = 0, h = 0;
  pin >> w >> h;
  CHECK(w == 40);
  CHECK(h > 0);

  const std::string svg = "/tmp/nagfem_heat_test.svg";
  write_heatmap_svg(m, u, svg);
  std::ifstream sin(svg);
  std::stringstream buf;
  buf << sin.rdbuf();
  CHECK(buf.str().find("<svg") != std::string::npos);
  CHECK(buf.str().find("</svg>") != std::string::npos);

  std::remove(csv.c_str());
  std::remove(ppm.c_str());
  std::remove(svg.c_str());
}
