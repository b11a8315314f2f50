#include "nagfem/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace nagfem {

double exact_solution_ex1(double x, double y, double t) {
  const double z = 0.5 * (x + y) + 0.4 * t;
  if (z >= 0) return 1.0 / (1.0 + 2.0 * std::exp(-z));
  const double ez = std::exp(z);
  return ez / (ez + 2.0);
}

Tensor builtin_diffusion(const std::string& name, double x, double y) {
  if (name == "ex1") return Tensor::identity(2);
  if (name == "ex2") {
    const double off = 199.0 * std::sqrt(3.0) / 4.0;
    return Tensor::sym2(203.0 / 4.0, off, 601.0 / 4.0);
  }
  if (name == "ex3") {
    const double theta = (x == 0.0 && y == 0.0) ? 3.14159265358979323846 / 2
                                                : std::atan2(y, x) + 3.14159265358979323846 / 2;
    const double c = std::cos(theta), s = std::sin(theta);
    return Tensor::sym2(200.0 * c * c + s * s, 199.0 * c * s, 200.0 * s * s + c * c);
  }
  throw std::invalid_argument("unknown diffusion '" + name + "' (expected ex1, ex2, ex3)");
}

ProblemSpec builtin_problem(const std::string& name) {
  ProblemSpec p;
  p.name = name;
  p.rf = ReactionFunction::nagumo(0.1);
  p.g = [](const double* x, double t) { return exact_solution_ex1(x[0], x[1], t); };
  p.u0 = [](const double* x, double) { return exact_solution_ex1(x[0], x[1], 0.0); };
  if (name == "ex1") {
    p.rect = Rect{-100, 100, -100, 100};
    p.field = DiffusionField::constant(Tensor::identity(2));
    p.default_T = 10.0;
    p.has_exact = true;
    p.exact = [](const double* x, double t) { return exact_solution_ex1(x[0], x[1], t); };
  } else if (name == "ex2") {
    p.rect = Rect{-100, 100, -170, 170};
    p.field = DiffusionField::constant(builtin_diffusion("ex2", 0, 0));
    p.default_T = 40.0;
  } else if (name == "ex3") {
    p.rect = Rect{-100, 100, -100, 100};
    p.field.dim = 2;
    p.field.eval = [](const double* x) { return builtin_diffusion("ex3", x[0], x[1]); };
    p.field.averaging = TensorAveraging::centroid;
    p.default_T = 40.0;
  } else {
    throw std::invalid_argument("unknown problem '" + name + "' (expected ex1, ex2, ex3)");
  }
  return p;
}

namespace {

// degree-5 rule on the reference triangle: barycentric abscissae and weights
struct QuadPoint {
  double l0, l1, l2, w;
};

const QuadPoint kTri7[7] = {
    {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
    {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
    {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
};

}  // namespace

double scaled_l2_error(const Mesh& m, const std::vector<double>& u_h,
                       const ScalarTimeFunction& exact, double t, Exec exec) {
  if (m.dim != 2) throw std::invalid_argument("l2 error: 2D meshes only");
  if (static_cast<int>(u_h.size()) != m.n_vertices())
    throw std::invalid_argument("l2 error: state length mismatch");
  if (!exact) throw std::invalid_argument("l2 error: null reference function");
  const double total = kernels::sum(m.n_elements(), exec, [&](std::size_t k) {
    const int* vtx = m.element(k);
    const double* p0 = m.vertex(vtx[0]);
    const double* p1 = m.vertex(vtx[1]);
    const double* p2 = m.vertex(vtx[2]);
    const double vol = m.element_volume(static_cast<int>(k));
    double acc = 0;
    for (const QuadPoint& q : kTri7) {
      const double xy[2] = {q.l0 * p0[0] + q.l1 * p1[0] + q.l2 * p2[0],
                            q.l0 * p0[1] + q.l1 * p1[1] + q.l2 * p2[1]};
      const double uh = q.l0 * u_h[vtx[0]] + q.l1 * u_h[vtx[1]] + q.l2 * u_h[vtx[2]];
      const double d = uh - exact(xy, t);
      acc += q.w * d * d;
    }
    return vol * acc;
  });
  return std::sqrt(total / m.domain_volume());
}

double scaled_l2_difference(const Mesh& m, const std::vector<double>& u,
                            const std::vector<double>& v, Exec exec) {
  if (u.size() != v.size() || static_cast<int>(u.size()) != m.n_vertices())
    throw std::invalid_argument("l2 difference: state length mismatch");
  const int nloc = m.dim + 1;
  const double denom = (m.dim + 1.0) * (m.dim + 2.0);
  const double total = kernels::sum(m.n_elements(), exec, [&](std::size_t k) {
    const int* vtx = m.element(k);
    double d[4];
    for (int a = 0; a < nloc; ++a) d[a] = u[vtx[a]] - v[vtx[a]];
    double acc = 0;
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b) acc += d[a] * d[b] * (a == b ? 2.0 : 1.0);
    return m.element_volume(static_cast<int>(k)) * acc / denom;
  });
  return std::sqrt(total / m.domain_volume());
}

SimulationSummary run_problem(const ProblemSpec& p, const Mesh& m, const SchemeConfig& cfg,
                              double T) {
  Stepper stepper(m, p.field, p.g, cfg);
  stepper.initialize(p.u0);
  return run_simulation(stepper, T);
}

const char* name(ConvergenceMode m) { return m == ConvergenceMode::time ? "time" : "space"; }

ConvergenceMode parse_convergence_mode(const std::string& s) {
  if (s == "time") return ConvergenceMode::time;
  if (s == "space") return ConvergenceMode::space;
  throw std::invalid_argument("unknown convergence mode '" + s + "' (expected time, space)");
}

double ConvergenceTable::observed_rate() const {
  for (auto it = rows.rbegin(); it != rows.rend(); ++it)
    if (!std::isnan(it->rate)) return it->rate;
  return std::numeric_limits<double>::quiet_NaN();
}

ConvergenceTable convergence_study(const ProblemSpec& p, const SchemeConfig& cfg,
                                   const ConvergenceOptions& opt) {
  if (opt.levels < 2) throw std::invalid_argument("convergence study: need >= 2 levels");
  ConvergenceTable table;
  table.mode = opt.mode;

  if (opt.mode == ConvergenceMode::time) {
    const Mesh mesh = generate_structured_mesh(opt.kind, opt.nx0, opt.ny0, p.rect);
    std::vector<double> dts(opt.levels);
    for (int k = 0; k < opt.levels; ++k) dts[k] = opt.dt0 / (1 << k);

    SchemeConfig ref_cfg = cfg;
    ref_cfg.dt = dts.back() / opt.reference_refinement;
    const SimulationSummary ref = run_problem(p, mesh, ref_cfg, opt.T);

    for (int k = 0; k < opt.levels; ++k) {
      SchemeConfig level_cfg = cfg;
      level_cfg.dt = dts[k];
      const SimulationSummary s = run_problem(p, mesh, level_cfg, opt.T);
      ConvergenceRow row;
      row.param = dts[k];
      row.error = scaled_l2_difference(mesh, s.final_u, ref.final_u, cfg.solver.exec);
      if (k > 0) row.rate = std::log2(table.rows.back().error / row.error);
      table.rows.push_back(row);
    }
    return table;
  }

  if (!p.has_exact)
    throw std::invalid_argument("convergence study: space mode requires an exact solution");
  for (int k = 0; k < opt.levels; ++k) {
    const int nx = opt.nx0 << k, ny = opt.ny0 << k;
    const Mesh mesh = generate_structured_mesh(opt.kind, nx, ny, p.rect);
    SchemeConfig level_cfg = cfg;
    level_cfg.dt = opt.dt0;
    const SimulationSummary s = run_problem(p, mesh, level_cfg, opt.T);
    ConvergenceRow row;
    row.param = (p.rect.x1 - p.rect.x0) / nx;
    row.error = scaled_l2_error(mesh, s.final_u, p.exact, s.final_t, cfg.solver.exec);
    if (k > 0) row.rate = std::log2(table.rows.back().error / row.error);
    table.rows.push_back(row);
  }
  return table;
}

void write_convergence_csv(const ConvergenceTable& t, std::ostream& out) {
  out << (t.mode == ConvergenceMode::time ? "dt" : "h") << ",error,rate\n";
  char buf[128];
  for (const ConvergenceRow& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.param, r.error, r.rate);
    out << buf;
  }
}

void write_convergence_csv(const ConvergenceTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_convergence_csv(t, out);
}

void write_solution_csv(const Mesh& m, const std::vector<double>& u, const std::string& path) {
  if (static_cast<int>(u.size()) != m.n_vertices())
    throw std::invalid_argument("solution csv: state length mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "x,y,u\n";
  char buf[128];
  for (int i = 0; i < m.n_vertices(); ++i) {
    const double* x = m.vertex(i);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], m.dim > 1 ? x[1] : 0.0, u[i]);
    out << buf;
  }
}

namespace {

struct Rgb {
  unsigned char r, g, b;
};

// piecewise-linear blue -> cyan -> green -> yellow -> red over [0, 1]
Rgb colormap(double v) {
  v = std::clamp(v, 0.0, 1.0);
  const double s = 4.0 * v;
  auto chan = [](double x) {
    return static_cast<unsigned char>(std::lround(255.0 * std::clamp(x, 0.0, 1.0)));
  };
  if (s < 1) return {0, chan(s), 255};
  if (s < 2) return {0, 255, chan(2 - s)};
  if (s < 3) return {chan(s - 2), 255, 0};
  return {255, chan(4 - s), 0};
}

constexpr double kBlankTol = 1e-12;

}  // namespace

void write_heatmap_ppm(const Mesh& m, const std::vector<double>& u, int width,
                       const std::string& path) {
  if (m.dim != 2) throw std::invalid_argument("heatmap: 2D meshes only");
  if (static_cast<int>(u.size()) != m.n_vertices())
    throw std::invalid_argument("heatmap: state length mismatch");
  if (width < 8) throw std::invalid_argument("heatmap: width too small");

  double x0 = m.vertex(0)[0], x1 = x0, y0 = m.vertex(0)[1], y1 = y0;
  for (int i = 1; i < m.n_vertices(); ++i) {
    x0 = std::min(x0, m.vertex(i)[0]);
    x1 = std::max(x1, m.vertex(i)[0]);
    y0 = std::min(y0, m.vertex(i)[1]);
    y1 = std::max(y1, m.vertex(i)[1]);
  }
  const int height = std::max(8, static_cast<int>(std::lround(width * (y1 - y0) / (x1 - x0))));

  // uniform bins over element bounding boxes for point location
  const int gx = std::max(1, static_cast<int>(std::sqrt(m.n_elements() / 2.0)));
  const int gy = gx;
  std::vector<std::vector<int>> bins(static_cast<std::size_t>(gx) * gy);
  auto bin_x = [&](double x) {
    return std::clamp(static_cast<int>((x - x0) / (x1 - x0) * gx), 0, gx - 1);
  };
  auto bin_y = [&](double y) {
    return std::clamp(static_cast<int>((y - y0) / (y1 - y0) * gy), 0, gy - 1);
  };
  for (int k = 0; k < m.n_elements(); ++k) {
    const int* vtx = m.element(k);
    double ex0 = m.vertex(vtx[0])[0], ex1 = ex0, ey0 = m.vertex(vtx[0])[1], ey1 = ey0;
    for (int a = 1; a < 3; ++a) {
      ex0 = std::min(ex0, m.vertex(vtx[a])[0]);
      ex1 = std::max(ex1, m.vertex(vtx[a])[0]);
      ey0 = std::min(ey0, m.vertex(vtx[a])[1]);
      ey1 = std::max(ey1, m.vertex(vtx[a])[1]);
    }
    for (int bx = bin_x(ex0); bx <= bin_x(ex1); ++bx)
      for (int by = bin_y(ey0); by <= bin_y(ey1); ++by)
        bins[static_cast<std::size_t>(by) * gx + bx].push_back(k);
  }

  auto sample = [&](double px, double py, double* out) {
    for (int k : bins[static_cast<std::size_t>(bin_y(py)) * gx + bin_x(px)]) {
      const int* vtx = m.element(k);
      const double* a = m.vertex(vtx[0]);
      const double* b = m.vertex(vtx[1]);
      const double* c = m.vertex(vtx[2]);
      const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
      const double l1 = ((px - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (py - a[1])) / det;
      const double l2 = ((b[0] - a[0]) * (py - a[1]) - (px - a[0]) * (b[1] - a[1])) / det;
      const double l0 = 1.0 - l1 - l2;
      if (l0 < -1e-12 || l1 < -1e-12 || l2 < -1e-12) continue;
      *out = l0 * u[vtx[0]] + l1 * u[vtx[1]] + l2 * u[vtx[2]];
      return true;
    }
    return false;
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "P6\n" << width << ' ' << height << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * 3);
  for (int j = 0; j < height; ++j) {
    const double py = y1 - (j + 0.5) * (y1 - y0) / height;
    for (int i = 0; i < width; ++i) {
      const double px = x0 + (i + 0.5) * (x1 - x0) / width;
      double v;
      Rgb c{255, 255, 255};
      if (sample(px, py, &v) && v >= -kBlankTol && v <= 1.0 + kBlankTol) c = colormap(v);
      row[3 * i] = c.r;
      row[3 * i + 1] = c.g;
      row[3 * i + 2] = c.b;
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
}

void write_heatmap_svg(const Mesh& m, const std::vector<double>& u, const std::string& path) {
  if (m.dim != 2) throw std::invalid_argument("heatmap: 2D meshes only");
  if (static_cast<int>(u.size()) != m.n_vertices())
    throw std::invalid_argument("heatmap: state length mismatch");

  double x0 = m.vertex(0)[0], x1 = x0, y0 = m.vertex(0)[1], y1 = y0;
  for (int i = 1; i < m.n_vertices(); ++i) {
    x0 = std::min(x0, m.vertex(i)[0]);
    x1 = std::max(x1, m.vertex(i)[0]);
    y0 = std::min(y0, m.vertex(i)[1]);
    y1 = std::max(y1, m.vertex(i)[1]);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6g %.6g %.6g %.6g\">\n", x0,
                -y1, x1 - x0, y1 - y0);
  out << buf << "<rect x=\"" << x0 << "\" y=\"" << -y1 << "\" width=\"" << (x1 - x0)
      << "\" height=\"" << (y1 - y0) << "\" fill=\"white\"/>\n";
  for (int k = 0; k < m.n_elements(); ++k) {
    const int* vtx = m.element(k);
    const double v = (u[vtx[0]] + u[vtx[1]] + u[vtx[2]]) / 3.0;
    if (v < -kBlankTol || v > 1.0 + kBlankTol) continue;
    const Rgb c = colormap(v);
    std::snprintf(buf, sizeof buf,
                  "<polygon points=\"%.6g,%.6g %.6g,%.6g %.6g,%.6g\" fill=\"rgb(%d,%d,%d)\"/>\n",
                  m.vertex(vtx[0])[0], -m.vertex(vtx[0])[1], m.vertex(vtx[1])[0],
                  -m.vertex(vtx[1])[1], m.vertex(vtx[2])[0], -m.vertex(vtx[2])[1], c.r, c.g, c.b);
    out << buf;
  }
  out << "</svg>\n";
}

}  // namespace nagfem
