#include "nagfem/schemes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>

namespace nagfem {

namespace {

double vec_min(const std::vector<double>& v, Exec exec) {
  return kernels::min_value(v.size(), exec, [&](std::size_t i) { return v[i]; });
}

double vec_max(const std::vector<double>& v, Exec exec) {
  return kernels::max_value(v.size(), exec, [&](std::size_t i) { return v[i]; });
}

}  // namespace

const char* name(Enforcement e) {
  switch (e) {
    case Enforcement::off: return "off";
    case Enforcement::warn: return "warn";
    case Enforcement::strict: return "strict";
  }
  return "?";
}

Enforcement parse_enforcement(const std::string& s) {
  if (s == "off") return Enforcement::off;
  if (s == "warn") return Enforcement::warn;
  if (s == "strict") return Enforcement::strict;
  throw std::invalid_argument("unknown enforcement mode '" + s + "' (expected off, warn, strict)");
}

double range_max(const std::function<double(double)>& h, double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo == hi) return h(lo);
  const int n = 4096;
  double best = -std::numeric_limits<double>::infinity();
  int bi = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = h(x);
    if (v > best) {
      best = v;
      bi = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, bi - 1) / n;
  double b = lo + (hi - lo) * std::min(n, bi + 1) / n;
  for (int it = 0; it < 200 && b > a; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (h(m1) < h(m2))
      a = m1;
    else
      b = m2;
  }
  return std::max(best, h(0.5 * (a + b)));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_inv(double m) { return m > 0 ? 1.0 / m : kInf; }

double pos(double v) { return v > 0 ? v : 0.0; }
double neg(double v) { return v < 0 ? v : 0.0; }

}  // namespace

ConditionWindow nonnegativity_window(const AngleConditionReport& ar, const ReactionFunction& rf,
                                     Treatment treatment, Lumping lumping, double u_lo,
                                     double u_hi) {
  ConditionWindow w;
  w.d_acute = ar.d_acute;
  w.scale = ar.scale;
  w.u_lo = std::min(u_lo, u_hi);
  w.u_hi = std::max(u_lo, u_hi);
  const double beta = (ar.dim + 1.0) * (ar.dim + 2.0);
  const double s = ar.scale;
  const bool lumped = lumping == Lumping::lumped;

  auto growth = [&](double u) { return rf.f(u) + u * rf.df(u); };

  auto consistent_lower = [&](double adjustment) {
    const double denom = beta * ar.d_acute - s * adjustment;
    w.mesh_ok = denom > 0;
    w.dt_lower = denom > 0 ? s / denom : kInf;
  };

  switch (treatment) {
    case Treatment::em:
      w.max_abs_f_neg = range_max([&](double u) { return -neg(rf.f(u)); }, w.u_lo, w.u_hi);
      w.dt_upper = safe_inv(w.max_abs_f_neg);
      w.upper_strict = false;
      w.mesh_ok = ar.anoac;
      w.dt_lower = lumped ? 0.0 : (ar.d_acute > 0 ? s / (beta * ar.d_acute) : kInf);
      break;
    case Treatment::im:
      w.max_uf_prime_pos = range_max([&](double u) { return pos(u * rf.df(u)); }, w.u_lo, w.u_hi);
      w.max_f_plus_ufp_pos = range_max([&](double u) { return pos(growth(u)); }, w.u_lo, w.u_hi);
      w.dt_upper = safe_inv(std::max(w.max_uf_prime_pos, w.max_f_plus_ufp_pos));
      if (lumped) {
        w.upper_strict = false;
        w.mesh_ok = ar.anoac;
        w.dt_lower = 0.0;
      } else {
        w.upper_strict = true;
        w.max_abs_f_plus_ufp_neg =
            range_max([&](double u) { return -neg(growth(u)); }, w.u_lo, w.u_hi);
        consistent_lower(w.max_abs_f_plus_ufp_neg);
      }
      break;
    case Treatment::heim1:
      w.max_f_pos = range_max([&](double u) { return pos(rf.f(u)); }, w.u_lo, w.u_hi);
      w.dt_upper = safe_inv(w.max_f_pos);
      w.upper_strict = true;
      if (lumped) {
        w.mesh_ok = ar.anoac;
        w.dt_lower = 0.0;
      } else {
        w.max_abs_f_neg = range_max([&](double u) { return -neg(rf.f(u)); }, w.u_lo, w.u_hi);
        consistent_lower(w.max_abs_f_neg);
      }
      break;
    case Treatment::heim2:
      w.dt_upper = kInf;
      w.upper_strict = false;
      if (lumped) {
        w.mesh_ok = ar.anoac;
        w.dt_lower = 0.0;
      } else {
        w.max_abs_f_neg = range_max([&](double u) { return -neg(rf.f(u)); }, w.u_lo, w.u_hi);
        consistent_lower(w.max_abs_f_neg);
      }
      break;
  }
  return w;
}

namespace {

std::pair<double, double> state_range(const std::vector<double>& u_n, const SchemeConfig& cfg) {
  if (cfg.apriori_range || u_n.empty()) return {cfg.range_lo, cfg.range_hi};
  return {vec_min(u_n, cfg.solver.exec), vec_max(u_n, cfg.solver.exec)};
}

}  // namespace

ConditionWindow nonnegativity_window(const Mesh& m, const DiffusionField& field,
                                     const std::vector<double>& u_n, const SchemeConfig& cfg) {
  const AngleConditionReport ar = angle_condition(m, field, cfg.solver.exec);
  const auto [lo, hi] = state_range(u_n, cfg);
  return nonnegativity_window(ar, cfg.rf, cfg.treatment, cfg.lumping, lo, hi);
}

ConditionWindow boundedness_window(const AngleConditionReport& ar, const ReactionFunction& rf,
                                   Treatment treatment, double u_lo, double u_hi) {
  if (!rf.is_nagumo())
    throw std::invalid_argument("boundedness window requires the Nagumo reaction preset");
  const double a = rf.nagumo_a();
  ConditionWindow w =
      nonnegativity_window(ar, rf, treatment, Lumping::consistent, u_lo, u_hi);
  switch (treatment) {
    case Treatment::em:
      w.max_bound_term =
          range_max([&](double u) { return -neg(u * (a - u)); }, w.u_lo, w.u_hi);
      w.dt_upper = safe_inv(std::max(w.max_abs_f_neg, w.max_bound_term));
      w.upper_strict = false;
      break;
    case Treatment::im:
      w.max_bound_term =
          range_max([&](double u) { return pos(u - a + u * rf.df(u)); }, w.u_lo, w.u_hi);
      w.dt_upper = safe_inv(
          std::max({w.max_uf_prime_pos, w.max_f_plus_ufp_pos, w.max_bound_term}));
      w.upper_strict = true;
      break;
    case Treatment::heim1:
      w.max_bound_term = range_max([&](double u) { return pos(u - a); }, w.u_lo, w.u_hi);
      w.dt_upper = safe_inv(std::max(w.max_f_pos, w.max_bound_term));
      w.upper_strict = true;
      break;
    case Treatment::heim2:
      w.max_bound_term = range_max(
          [&](double u) { return pos(neg(u - a) + u * pos(u - a)); }, w.u_lo, w.u_hi);
      w.dt_upper = safe_inv(w.max_bound_term);
      w.upper_strict = false;
      break;
  }
  return w;
}

ConditionWindow boundedness_window(const Mesh& m, const DiffusionField& field,
                                   const std::vector<double>& u_n, const SchemeConfig& cfg) {
  if (cfg.lumping == Lumping::lumped)
    throw std::invalid_argument(
        "boundedness window is only available for the consistent discretization");
  const AngleConditionReport ar = angle_condition(m, field, cfg.solver.exec);
  const auto [lo, hi] = state_range(u_n, cfg);
  return boundedness_window(ar, cfg.rf, cfg.treatment, lo, hi);
}

namespace {

SparseMatrix combine_lhs(const SparseMatrix& mass, const SparseMatrix& stiffness,
                         const ReactionMatrices& rm, double dt, int n_interior) {
  SparseMatrix lhs = add_scaled(1.0, mass, dt, stiffness);
  if (rm.b) lhs = add_scaled(1.0, lhs, -dt, *rm.b);
  // boundary rows inherit the factor dt from the identity rows of the
  // stiffness matrix; rescale them so the row reads u_i = g_i
  auto& v = lhs.val();
  for (int i = n_interior; i < lhs.rows(); ++i)
    for (int t = lhs.row_ptr()[i]; t < lhs.row_ptr()[i + 1]; ++t) v[t] /= dt;
  return lhs;
}

SparseMatrix combine_rhs(const SparseMatrix& mass, const ReactionMatrices& rm, double dt) {
  if (rm.c) return add_scaled(1.0, mass, dt, *rm.c);
  return mass;
}

}  // namespace

StepMatrices step_matrices(const Mesh& m, const DiffusionField& field,
                           const std::vector<double>& u_n, const SchemeConfig& cfg, double dt,
                           Exec exec) {
  if (!(dt > 0)) throw std::invalid_argument("step: dt must be positive");
  SparseMatrix mass = cfg.lumping == Lumping::lumped
                          ? diagonal_matrix(assemble_lumped_mass(m, exec))
                          : assemble_mass(m, exec);
  SparseMatrix a = assemble_stiffness(m, field, exec);
  ReactionMatrices rm = assemble_reaction(m, u_n, cfg.rf, cfg.treatment, cfg.lumping, exec);
  StepMatrices out{combine_lhs(mass, a, rm, dt, m.n_interior), combine_rhs(mass, rm, dt)};
  return out;
}

Stepper::Stepper(const Mesh& m, const DiffusionField& field, ScalarTimeFunction g,
                 SchemeConfig cfg)
    : mesh_(m), field_(field), g_(std::move(g)), cfg_(std::move(cfg)) {
  if (!(cfg_.dt > 0)) throw std::invalid_argument("scheme: dt must be positive");
  if (!g_) throw std::invalid_argument("scheme: null boundary function");
  angle_ = angle_condition(mesh_, field_, cfg_.solver.exec);
  stiffness_ = assemble_stiffness(mesh_, field_, cfg_.solver.exec);
  mass_ = cfg_.lumping == Lumping::lumped
              ? diagonal_matrix(assemble_lumped_mass(mesh_, cfg_.solver.exec))
              : assemble_mass(mesh_, cfg_.solver.exec);
  state_.u.assign(mesh_.n_vertices(), 0.0);
}

void Stepper::initialize(const ScalarTimeFunction& u0) {
  if (!u0) throw std::invalid_argument("scheme: null initial function");
  const int nv = mesh_.n_vertices();
  state_.u.resize(nv);
  for (int i = 0; i < mesh_.n_interior; ++i) state_.u[i] = u0(mesh_.vertex(i), 0.0);
  for (int i = mesh_.n_interior; i < nv; ++i) state_.u[i] = g_(mesh_.vertex(i), 0.0);
  state_.t = 0.0;
  state_.step_count = 0;
}

void Stepper::set_state(std::vector<double> u, double t) {
  if (static_cast<int>(u.size()) != mesh_.n_vertices())
    throw std::invalid_argument("scheme: state length mismatch");
  state_.u = std::move(u);
  state_.t = t;
  state_.step_count = 0;
}

ConditionWindow Stepper::current_window() const {
  const auto [lo, hi] = state_range(state_.u, cfg_);
  return nonnegativity_window(angle_, cfg_.rf, cfg_.treatment, cfg_.lumping, lo, hi);
}

StepRecord Stepper::advance(double dt_n) {
  if (!(dt_n > 0)) throw std::invalid_argument("step: dt must be positive");
  const Exec exec = cfg_.solver.exec;

  StepRecord rec;
  rec.window = current_window();
  rec.dt_in_window = rec.window.contains(dt_n);
  rec.dt = dt_n;
  if (!rec.dt_in_window && cfg_.enforce != Enforcement::off) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "step %d (t=%.6g): dt=%.6g outside the admissible window [%.6g, %.6g%s with %s/%s"
                  " (mesh_ok=%d, d_acute=%.6g)",
                  state_.step_count + 1, state_.t, dt_n, rec.window.dt_lower, rec.window.dt_upper,
                  rec.window.upper_strict ? ")" : "]", name(cfg_.treatment), name(cfg_.lumping),
                  rec.window.mesh_ok ? 1 : 0, rec.window.d_acute);
    if (cfg_.enforce == Enforcement::strict)
      throw ConditionViolation(std::string("condition enforcement: ") + buf, rec.window);
    if (warnings_emitted_ < 3)
      std::cerr << "warning: " << buf << "\n";
    else if (warnings_emitted_ == 3)
      std::cerr << "warning: further window violations suppressed\n";
    ++warnings_emitted_;
  }

  ReactionMatrices rm =
      assemble_reaction(mesh_, state_.u, cfg_.rf, cfg_.treatment, cfg_.lumping, exec);
  SparseMatrix lhs = combine_lhs(mass_, stiffness_, rm, dt_n, mesh_.n_interior);

  const int nv = mesh_.n_vertices();
  std::vector<double> rhs(nv), tmp(nv);
  mass_.matvec(state_.u.data(), rhs.data(), exec);
  if (rm.c) {
    rm.c->matvec(state_.u.data(), tmp.data(), exec);
    kernels::parallel_for(nv, exec, [&](std::size_t i) { rhs[i] += dt_n * tmp[i]; });
  }
  const double t_next = state_.t + dt_n;
  for (int i = mesh_.n_interior; i < nv; ++i) rhs[i] = g_(mesh_.vertex(i), t_next);

  SolveOptions so = cfg_.solver;
  so.initial_guess = &state_.u;
  SolveResult sol = solve_linear(lhs, rhs, so);
  for (int i = mesh_.n_interior; i < nv; ++i) sol.x[i] = rhs[i];

  state_.u = std::move(sol.x);
  state_.t = t_next;
  ++state_.step_count;

  rec.step = state_.step_count;
  rec.t = state_.t;
  rec.u_min = vec_min(state_.u, exec);
  rec.u_max = vec_max(state_.u, exec);
  rec.solver_iterations = sol.iterations;
  rec.solver_residual = sol.relative_residual;
  rec.solver_method = sol.method;
  return rec;
}

SimulationSummary run_simulation(Stepper& stepper, double T) {
  if (T < 0) throw std::invalid_argument("simulation: negative final time");
  const auto start = std::chrono::steady_clock::now();
  const double dt = stepper.config().dt;
  const Exec exec = stepper.config().solver.exec;

  SimulationSummary s;
  s.u_min = vec_min(stepper.state().u, exec);
  s.u_max = vec_max(stepper.state().u, exec);

  const double t_end = stepper.state().t + T;
  const double eps = 1e-9 * std::max(1.0, std::abs(t_end));
  while (stepper.state().t < t_end - eps) {
    const double dt_n = std::min(dt, t_end - stepper.state().t);
    StepRecord rec = stepper.advance(dt_n);
    s.u_min = std::min(s.u_min, rec.u_min);
    s.u_max = std::max(s.u_max, rec.u_max);
    if (!rec.dt_in_window) ++s.condition_violations;
    s.history.push_back(std::move(rec));
  }
  s.steps = static_cast<int>(s.history.size());
  s.final_t = stepper.state().t;
  s.final_u = stepper.state().u;
  s.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

void write_history_csv(const std::vector<StepRecord>& history, std::ostream& out) {
  out << "step,t,u_min,u_max,dt_lower,dt_upper,mesh_ok,solver_iters\n";
  char buf[256];
  for (const StepRecord& r : history) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n", r.step, r.t,
                  r.u_min, r.u_max, r.window.dt_lower, r.window.dt_upper,
                  r.window.mesh_ok ? 1 : 0, r.solver_iterations);
    out << buf;
  }
}

void write_history_csv(const std::vector<StepRecord>& history, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_history_csv(history, out);
}

}  // namespace nagfem
