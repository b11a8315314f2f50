#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nagfem/assembly.hpp"
#include "nagfem/geometry.hpp"
#include "nagfem/mesh.hpp"
#include "nagfem/sparse.hpp"

namespace nagfem {

enum class Enforcement { off, warn, strict };
const char* name(Enforcement e);
Enforcement parse_enforcement(const std::string& s);  // "off"/"warn"/"strict"

struct SchemeConfig {
  Treatment treatment = Treatment::em;
  Lumping lumping = Lumping::consistent;
  ReactionFunction rf = ReactionFunction::nagumo(0.1);
  double dt = 0.1;
  Enforcement enforce = Enforcement::off;
  // When set, step-size windows are evaluated over [range_lo, range_hi]
  // instead of the range of the current state.
  bool apriori_range = false;
  double range_lo = 0.0;
  double range_hi = 1.0;
  SolveOptions solver;
};

// Admissible time-step window for one treatment at one state range. dt_lower
// is +inf when the mesh condition fails; dt_upper is +inf when the treatment
// imposes no upper bound. The max_* fields record the range maxima entering
// the bounds (NaN when the quantity plays no role for the treatment).
struct ConditionWindow {
  double dt_lower = 0.0;
  double dt_upper = std::numeric_limits<double>::infinity();
  bool upper_strict = false;  // whether the upper endpoint is excluded
  bool mesh_ok = false;
  double d_acute = 0.0;
  double scale = 0.0;  // (|domain|/n_elements)^(2/dim)
  double u_lo = 0.0, u_hi = 0.0;
  double max_abs_f_neg = nan_;          // max |f^-(u)|
  double max_f_pos = nan_;              // max f^+(u)
  double max_uf_prime_pos = nan_;       // max (u f'(u))^+
  double max_f_plus_ufp_pos = nan_;     // max (f(u) + u f'(u))^+
  double max_abs_f_plus_ufp_neg = nan_; // max |(f(u) + u f'(u))^-|
  double max_bound_term = nan_;         // treatment-specific boundedness extra

  bool contains(double dt) const {
    if (!mesh_ok || dt < dt_lower) return false;
    return upper_strict ? dt < dt_upper : dt <= dt_upper;
  }

 private:
  static constexpr double nan_ = std::numeric_limits<double>::quiet_NaN();
};

ConditionWindow nonnegativity_window(const AngleConditionReport& angle, const ReactionFunction& rf,
                                     Treatment treatment, Lumping lumping, double u_lo, double u_hi);
ConditionWindow nonnegativity_window(const Mesh& m, const DiffusionField& field,
                                     const std::vector<double>& u_n, const SchemeConfig& cfg);

// Window under which the solution also stays below 1. Requires the Nagumo
// preset and the consistent discretization.
ConditionWindow boundedness_window(const AngleConditionReport& angle, const ReactionFunction& rf,
                                   Treatment treatment, double u_lo, double u_hi);
ConditionWindow boundedness_window(const Mesh& m, const DiffusionField& field,
                                   const std::vector<double>& u_n, const SchemeConfig& cfg);

// Largest value of h over [lo, hi]: dense scan plus local refinement.
double range_max(const std::function<double(double)>& h, double lo, double hi);

struct StepRecord {
  int step = 0;
  double t = 0;  // time reached after the step
  double dt = 0;
  double u_min = 0, u_max = 0;  // over all nodes after the step
  ConditionWindow window;       // evaluated at the pre-step state
  bool dt_in_window = false;
  int solver_iterations = 0;
  double solver_residual = 0;
  const char* solver_method = "";
};

struct SimulationState {
  std::vector<double> u;
  double t = 0;
  int step_count = 0;
};

class ConditionViolation : public std::runtime_error {
 public:
  ConditionViolation(const std::string& what, ConditionWindow w)
      : std::runtime_error(what), window(w) {}
  ConditionWindow window;
};

// One backward Euler step: (M - dt B + dt A) u^{n+1} = (M + dt C) u^n + dt g,
// with B/C present per treatment and boundary rows rescaled so they read
// u_i = g(x_i, t_{n+1}). The matrices are exposed for structural checks.
struct StepMatrices {
  SparseMatrix lhs;
  SparseMatrix rhs;  // M + dt C (zero boundary rows)
};
StepMatrices step_matrices(const Mesh& m, const DiffusionField& field,
                           const std::vector<double>& u_n, const SchemeConfig& cfg, double dt,
                           Exec exec = Exec::parallel);

// Holds the assembled time-independent matrices and advances the state. The
// mesh must outlive the stepper.
class Stepper {
 public:
  Stepper(const Mesh& m, const DiffusionField& field, ScalarTimeFunction g, SchemeConfig cfg);

  // State from u0 at t = 0 on interior vertices and g on boundary vertices.
  void initialize(const ScalarTimeFunction& u0);
  void set_state(std::vector<double> u, double t);

  const SimulationState& state() const { return state_; }
  const AngleConditionReport& angle_report() const { return angle_; }
  const SchemeConfig& config() const { return cfg_; }

  // Window at the current state (or the configured a-priori range).
  ConditionWindow current_window() const;

  StepRecord advance() { return advance(cfg_.dt); }
  StepRecord advance(double dt_n);

 private:
  const Mesh& mesh_;
  DiffusionField field_;
  ScalarTimeFunction g_;
  SchemeConfig cfg_;
  AngleConditionReport angle_;
  SparseMatrix stiffness_;
  SparseMatrix mass_;  // consistent, or the lumped diagonal
  SimulationState state_;
  int warnings_emitted_ = 0;
};

struct SimulationSummary {
  double u_min = 0, u_max = 0;  // over all steps and nodes, initial state included
  double final_t = 0;
  int steps = 0;
  int condition_violations = 0;  // steps whose window excluded the step size
  double wall_seconds = 0;
  std::vector<StepRecord> history;
  std::vector<double> final_u;
};

// Advances an initialized stepper to time T (last step shortened to land on T).
SimulationSummary run_simulation(Stepper& stepper, double T);

// step, t, u_min, u_max, dt_lower, dt_upper, mesh_ok, solver_iters
void write_history_csv(const std::vector<StepRecord>& history, std::ostream& out);
void write_history_csv(const std::vector<StepRecord>& history, const std::string& path);

}  // namespace nagfem
