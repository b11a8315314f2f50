#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nagfem/experiments.hpp"
#include "nagfem/mesh.hpp"
#include "nagfem/schemes.hpp"

namespace {

using nagfem::Exec;
using json = nlohmann::json;

constexpr int kExitParse = 2;
constexpr int kExitAnoacOnly = 3;
constexpr int kExitNoCondition = 4;
constexpr int kExitStrictAbort = 5;

[[noreturn]] void fail_parse(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(kExitParse);
}

// flat key=value config; '#' starts a comment; later keys win
std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_parse("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail_parse(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_parse(path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

const std::vector<std::string> kKnownKeys = {
    "problem",          "mesh.import",  "mesh.kind",      "mesh.nx",
    "mesh.ny",          "scheme.treatment", "scheme.lumping", "scheme.dt",
    "scheme.T",         "scheme.enforce",   "scheme.tol",     "scheme.max_iter",
    "scheme.apriori",   "output.dir",       "output.formats", "output.heatmap_width",
    "serial",
};

void check_known_keys(const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    bool known = false;
    for (const auto& known_key : kKnownKeys) known = known || k == known_key;
    if (!known) fail_parse("unknown config key '" + k + "'");
  }
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail_parse("invalid number '" + s + "' for " + what);
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail_parse("invalid integer '" + s + "' for " + what);
  }
}

nagfem::StructuredKind parse_kind(const std::string& s) {
  if (s == "right45") return nagfem::StructuredKind::right45;
  if (s == "right135") return nagfem::StructuredKind::right135;
  if (s == "acute8") return nagfem::StructuredKind::acute8;
  fail_parse("unknown mesh kind '" + s + "' (expected right45, right135, acute8)");
}

nagfem::Rect parse_rect(const std::string& s) {
  nagfem::Rect r;
  char extra;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf%c", &r.x0, &r.x1, &r.y0, &r.y1, &extra) != 4)
    fail_parse("invalid rect '" + s + "' (expected x0,x1,y0,y1)");
  return r;
}

nagfem::DiffusionField parse_diffusion(const std::string& s) {
  if (s == "ex1" || s == "ex2" || s == "ex3") {
    if (s == "ex3") return nagfem::builtin_problem("ex3").field;
    return nagfem::DiffusionField::constant(nagfem::builtin_diffusion(s, 0, 0));
  }
  if (s.rfind("iso:", 0) == 0) {
    const double v = to_double(s.substr(4), "isotropic diffusion value");
    nagfem::Tensor t = nagfem::Tensor::identity(2);
    t.v[0][0] = t.v[1][1] = v;
    return nagfem::DiffusionField::constant(t);
  }
  if (s.rfind("tensor:", 0) == 0) {
    double d00, d01, d11;
    char extra;
    if (std::sscanf(s.c_str() + 7, "%lf,%lf,%lf%c", &d00, &d01, &d11, &extra) != 3)
      fail_parse("invalid tensor '" + s + "' (expected tensor:d00,d01,d11)");
    return nagfem::DiffusionField::constant(nagfem::Tensor::sym2(d00, d01, d11));
  }
  fail_parse("unknown diffusion '" + s + "' (expected ex1, ex2, ex3, iso:V, tensor:a,b,c)");
}

json window_json(const nagfem::ConditionWindow& w) {
  json j;
  j["dt_lower"] = w.dt_lower;
  j["dt_upper"] = std::isinf(w.dt_upper) ? json("inf") : json(w.dt_upper);
  j["upper_strict"] = w.upper_strict;
  j["mesh_ok"] = w.mesh_ok;
  j["d_acute"] = w.d_acute;
  j["scale"] = w.scale;
  j["u_range"] = {w.u_lo, w.u_hi};
  return j;
}

json angle_json(const nagfem::AngleConditionReport& ar) {
  json j;
  j["d_acute"] = ar.d_acute;
  j["d_acute_ave"] = ar.d_acute_ave;
  j["scale"] = ar.scale;
  j["anoac"] = ar.anoac;
  j["aaac"] = ar.aaac;
  j["worst_element"] = {{"index", ar.worst_element},
                        {"pair", {ar.worst_pair[0], ar.worst_pair[1]}},
                        {"value", ar.worst_value}};
  return j;
}

// value precedence: command-line flag, then config key, then fallback
class Setting {
 public:
  Setting(CLI::App* cmd, const std::string& flag, const std::string& key, std::string fallback,
          const std::string& desc)
      : key_(key), value_(std::move(fallback)) {
    opt_ = cmd->add_option(flag, raw_, desc);
  }
  void resolve(const std::map<std::string, std::string>& cfg) {
    if (opt_->count() > 0)
      value_ = raw_;
    else if (auto it = cfg.find(key_); it != cfg.end())
      value_ = it->second;
  }
  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

 private:
  CLI::Option* opt_;
  std::string key_, raw_, value_;
};

struct MeshSource {
  Setting import, kind, nx, ny;
  MeshSource(CLI::App* cmd, const std::string& default_kind, const std::string& default_n)
      : import(cmd, "--mesh", "mesh.import", "", "mesh file to load"),
        kind(cmd, "--mesh-kind", "mesh.kind", default_kind,
             "generator kind (right45, right135, acute8)"),
        nx(cmd, "--nx", "mesh.nx", default_n, "cells along x"),
        ny(cmd, "--ny", "mesh.ny", default_n, "cells along y") {}

  nagfem::Mesh build(const nagfem::Rect& rect, const std::map<std::string, std::string>& cfg) {
    import.resolve(cfg);
    kind.resolve(cfg);
    nx.resolve(cfg);
    ny.resolve(cfg);
    try {
      if (!import.empty()) return nagfem::load_mesh(import.str());
      return nagfem::generate_structured_mesh(parse_kind(kind.str()),
                                              to_int(nx.str(), "mesh.nx"),
                                              to_int(ny.str(), "mesh.ny"), rect);
    } catch (const std::runtime_error& e) {
      fail_parse(e.what());
    }
  }
};

std::string output_dir(const std::string& configured) {
  if (const char* env = std::getenv("NAGFEM_OUT_DIR"); env && *env) return env;
  return configured;
}

bool has_format(const std::string& formats, const std::string& f) {
  std::stringstream ss(formats);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (tok == f) return true;
  return false;
}

int cmd_mesh(const std::string& kind, int nx, int ny, const std::string& rect_str,
             const std::string& import, const std::string& out_path) {
  nagfem::Mesh m;
  nagfem::MeshGenReport report;
  bool generated = false;
  if (!import.empty()) {
    m = nagfem::load_mesh(import);
  } else {
    const nagfem::Rect rect = parse_rect(rect_str);
    m = nagfem::generate_structured_mesh(parse_kind(kind), nx, ny, rect, &report);
    generated = true;
  }
  std::cout << "vertices " << m.n_vertices() << "\nelements " << m.n_elements()
            << "\ninterior " << m.n_interior << "\n";
  if (generated && kind == "acute8")
    std::cout << "acute margin " << report.acute_margin_deg << " deg\n";
  if (!out_path.empty()) {
    nagfem::save_mesh(m, out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_diagnose(const std::string& mesh_path, const std::string& diffusion, Exec exec) {
  const nagfem::Mesh m = nagfem::load_mesh(mesh_path);
  const nagfem::DiffusionField field = parse_diffusion(diffusion);
  const nagfem::AngleConditionReport ar = nagfem::angle_condition(m, field, exec);
  std::cout << angle_json(ar).dump(2) << "\n";
  if (ar.aaac) return 0;
  if (ar.anoac) return kExitAnoacOnly;
  return kExitNoCondition;
}

int run_solve(const std::string& config_path, MeshSource& mesh_src, Setting& problem,
              Setting& treatment, Setting& lumping, Setting& dt, Setting& T, Setting& enforce,
              Setting& tol, Setting& max_iter, Setting& apriori, Setting& dir, Setting& formats,
              Setting& heat_width, bool serial_flag) {
  std::map<std::string, std::string> cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  check_known_keys(cfg);
  for (Setting* s : {&problem, &treatment, &lumping, &dt, &T, &enforce, &tol, &max_iter, &apriori,
                     &dir, &formats, &heat_width})
    s->resolve(cfg);

  const bool serial =
      serial_flag || (cfg.count("serial") && cfg.at("serial") != "0" && cfg.at("serial") != "false");

  nagfem::ProblemSpec p = nagfem::builtin_problem(problem.str());
  const nagfem::Mesh m = mesh_src.build(p.rect, cfg);

  nagfem::SchemeConfig sc;
  try {
    sc.treatment = nagfem::parse_treatment(treatment.str());
    sc.lumping = nagfem::parse_lumping(lumping.str());
    sc.enforce = nagfem::parse_enforcement(enforce.str());
  } catch (const std::invalid_argument& e) {
    fail_parse(e.what());
  }
  sc.rf = p.rf;
  sc.dt = to_double(dt.str(), "scheme.dt");
  if (!(sc.dt > 0)) fail_parse("scheme.dt must be positive");
  sc.solver.tol = to_double(tol.str(), "scheme.tol");
  sc.solver.max_iter = to_int(max_iter.str(), "scheme.max_iter");
  sc.solver.exec = serial ? Exec::serial : Exec::parallel;
  if (!apriori.empty()) {
    double lo, hi;
    char extra;
    if (std::sscanf(apriori.str().c_str(), "%lf,%lf%c", &lo, &hi, &extra) != 2)
      fail_parse("invalid range '" + apriori.str() + "' for scheme.apriori (expected lo,hi)");
    sc.apriori_range = true;
    sc.range_lo = lo;
    sc.range_hi = hi;
  }
  const double final_T = T.empty() ? p.default_T : to_double(T.str(), "scheme.T");
  if (final_T < 0) fail_parse("scheme.T must be nonnegative");

  const std::string out = output_dir(dir.str());
  std::filesystem::create_directories(out);

  nagfem::Stepper stepper(m, p.field, p.g, sc);
  stepper.initialize(p.u0);
  const nagfem::ConditionWindow nn_window = stepper.current_window();
  std::optional<nagfem::ConditionWindow> bd_window;
  if (sc.rf.is_nagumo() && sc.lumping == nagfem::Lumping::consistent) {
    const auto [lo, hi] = sc.apriori_range
                              ? std::pair{sc.range_lo, sc.range_hi}
                              : std::pair{nn_window.u_lo, nn_window.u_hi};
    bd_window = nagfem::boundedness_window(stepper.angle_report(), sc.rf, sc.treatment, lo, hi);
  }

  nagfem::SimulationSummary summary;
  try {
    summary = nagfem::run_simulation(stepper, final_T);
  } catch (const nagfem::ConditionViolation& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitStrictAbort;
  }

  if (has_format(formats.str(), "csv"))
    nagfem::write_history_csv(summary.history, out + "/steps.csv");
  if (has_format(formats.str(), "json")) {
    json j;
    j["problem"] = problem.str();
    j["mesh"] = {{"vertices", m.n_vertices()},
                 {"elements", m.n_elements()},
                 {"interior", m.n_interior}};
    j["scheme"] = {{"treatment", nagfem::name(sc.treatment)},
                   {"lumping", nagfem::name(sc.lumping)},
                   {"dt", sc.dt},
                   {"T", final_T},
                   {"enforce", nagfem::name(sc.enforce)},
                   {"tol", sc.solver.tol}};
    j["angle"] = angle_json(stepper.angle_report());
    j["windows"]["nonnegativity"] = window_json(nn_window);
    j["windows"]["boundedness"] = bd_window ? window_json(*bd_window) : json(nullptr);
    double fmin = summary.final_u.empty() ? 0 : summary.final_u[0];
    double fmax = fmin;
    for (const double v : summary.final_u) {
      fmin = std::min(fmin, v);
      fmax = std::max(fmax, v);
    }
    j["result"] = {{"u_min", summary.u_min},
                   {"u_max", summary.u_max},
                   {"final_u_min", fmin},
                   {"final_u_max", fmax},
                   {"steps", summary.steps},
                   {"final_t", summary.final_t},
                   {"condition_violations", summary.condition_violations},
                   {"wall_seconds", summary.wall_seconds}};
    std::ofstream js(out + "/summary.json");
    if (!js) throw std::runtime_error("cannot open '" + out + "/summary.json' for writing");
    js << j.dump(2) << "\n";
  }
  if (has_format(formats.str(), "svg"))
    nagfem::write_heatmap_svg(m, summary.final_u, out + "/solution.svg");
  if (has_format(formats.str(), "ppm"))
    nagfem::write_heatmap_ppm(m, summary.final_u, to_int(heat_width.str(), "heatmap width"),
                              out + "/solution.ppm");

  std::cout << "steps " << summary.steps << "\nu_min " << summary.u_min << "\nu_max "
            << summary.u_max << "\ncondition_violations " << summary.condition_violations
            << "\n";
  return 0;
}

int cmd_converge(const std::string& problem, const std::string& mode, int levels, double dt0,
                 int nx0, int ny0, double T, const std::string& kind,
                 const std::string& treatment, const std::string& dir, Exec exec) {
  nagfem::ProblemSpec p = nagfem::builtin_problem(problem);
  nagfem::SchemeConfig sc;
  try {
    sc.treatment = nagfem::parse_treatment(treatment);
  } catch (const std::invalid_argument& e) {
    fail_parse(e.what());
  }
  sc.rf = p.rf;
  sc.solver.exec = exec;
  nagfem::ConvergenceOptions opt;
  try {
    opt.mode = nagfem::parse_convergence_mode(mode);
  } catch (const std::invalid_argument& e) {
    fail_parse(e.what());
  }
  opt.levels = levels;
  opt.dt0 = dt0;
  opt.nx0 = nx0;
  opt.ny0 = ny0;
  opt.T = T;
  opt.kind = parse_kind(kind);

  nagfem::ConvergenceTable table;
  try {
    table = nagfem::convergence_study(p, sc, opt);
  } catch (const std::invalid_argument& e) {
    fail_parse(e.what());
  }

  const std::string out = output_dir(dir);
  std::filesystem::create_directories(out);
  nagfem::write_convergence_csv(table, out + "/convergence.csv");
  nagfem::write_convergence_csv(table, std::cout);
  std::cout << "observed_rate " << table.observed_rate() << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_csv) {
  if (inputs.empty()) fail_parse("report: no summary files given");
  std::vector<json> rows;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) fail_parse("cannot open '" + path + "'");
    json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      fail_parse(path + ": " + e.what());
    }
    if (!j.contains("result") || !j.contains("scheme")) fail_parse(path + ": not a run summary");
    rows.push_back(std::move(j));
  }
  std::ostringstream csv;
  csv << "problem,treatment,lumping,dt,u_min,u_max,violations\n";
  std::printf("%-8s %-9s %-10s %8s %12s %12s %10s\n", "problem", "treatment", "lumping", "dt",
              "u_min", "u_max", "violations");
  for (const json& j : rows) {
    const auto& s = j["scheme"];
    const auto& r = j["result"];
    std::printf("%-8s %-9s %-10s %8g %12.6g %12.6g %10d\n",
                j.value("problem", std::string("?")).c_str(),
                s.value("treatment", std::string("?")).c_str(),
                s.value("lumping", std::string("?")).c_str(), s.value("dt", 0.0),
                r.value("u_min", 0.0), r.value("u_max", 0.0),
                r.value("condition_violations", 0));
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.17g,%.17g,%.17g,%d\n",
                  j.value("problem", std::string("?")).c_str(),
                  s.value("treatment", std::string("?")).c_str(),
                  s.value("lumping", std::string("?")).c_str(), s.value("dt", 0.0),
                  r.value("u_min", 0.0), r.value("u_max", 0.0),
                  r.value("condition_violations", 0));
    csv << buf;
  }
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) fail_parse("cannot open '" + out_csv + "' for writing");
    out << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite element solver for reaction-diffusion problems with anisotropic diffusion"};
  app.require_subcommand(1);

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "generate or validate a mesh file");
  std::string mesh_kind = "right45", mesh_rect = "-100,100,-100,100", mesh_import, mesh_out;
  int mesh_nx = 20, mesh_ny = 20;
  mesh_cmd->add_option("--kind", mesh_kind, "right45, right135, or acute8");
  mesh_cmd->add_option("--nx", mesh_nx, "cells along x");
  mesh_cmd->add_option("--ny", mesh_ny, "cells along y");
  mesh_cmd->add_option("--rect", mesh_rect, "domain x0,x1,y0,y1");
  mesh_cmd->add_option("--import", mesh_import, "load and validate an existing mesh file");
  mesh_cmd->add_option("--out", mesh_out, "output mesh file");

  // diagnose
  auto* diag_cmd = app.add_subcommand("diagnose", "angle-condition report for a mesh and tensor");
  std::string diag_mesh, diag_diffusion = "ex1";
  bool diag_serial = false;
  diag_cmd->add_option("--mesh", diag_mesh, "mesh file")->required();
  diag_cmd->add_option("--diffusion", diag_diffusion, "ex1, ex2, ex3, iso:V, tensor:a,b,c");
  diag_cmd->add_flag("--serial", diag_serial, "single-threaded execution");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run a simulation");
  std::string solve_config;
  bool solve_serial = false;
  solve_cmd->add_option("--config", solve_config, "key=value config file");
  solve_cmd->add_flag("--serial", solve_serial, "single-threaded execution");
  MeshSource solve_mesh(solve_cmd, "right45", "160");
  Setting s_problem(solve_cmd, "--problem", "problem", "ex1", "ex1, ex2, or ex3");
  Setting s_treatment(solve_cmd, "--treatment", "scheme.treatment", "em",
                      "em, im, heim1, or heim2");
  Setting s_lumping(solve_cmd, "--lumping", "scheme.lumping", "consistent",
                    "consistent or lumped");
  Setting s_dt(solve_cmd, "--dt", "scheme.dt", "0.1", "time step");
  Setting s_T(solve_cmd, "--T", "scheme.T", "", "final time (problem default when omitted)");
  Setting s_enforce(solve_cmd, "--enforce", "scheme.enforce", "off", "off, warn, or strict");
  Setting s_tol(solve_cmd, "--tol", "scheme.tol", "1e-10", "linear solver tolerance");
  Setting s_max_iter(solve_cmd, "--max-iter", "scheme.max_iter", "5000",
                     "linear solver iteration cap");
  Setting s_apriori(solve_cmd, "--apriori", "scheme.apriori", "",
                    "evaluate windows over the range lo,hi instead of the state range");
  Setting s_dir(solve_cmd, "--out-dir", "output.dir", "out", "output directory");
  Setting s_formats(solve_cmd, "--formats", "output.formats", "csv,json",
                    "comma-separated: csv,json,svg,ppm");
  Setting s_heat_width(solve_cmd, "--heatmap-width", "output.heatmap_width", "400",
                       "ppm raster width in pixels");

  // converge
  auto* conv_cmd = app.add_subcommand("converge", "time or space convergence study");
  std::string conv_problem = "ex1", conv_mode = "time", conv_kind = "right45",
              conv_treatment = "em", conv_dir = "out";
  int conv_levels = 4, conv_nx0 = 100, conv_ny0 = 100;
  double conv_dt0 = 0.5, conv_T = 10.0;
  bool conv_serial = false;
  conv_cmd->add_option("--problem", conv_problem, "problem with an exact solution (ex1)");
  conv_cmd->add_option("--mode", conv_mode, "time or space");
  conv_cmd->add_option("--levels", conv_levels, "number of refinement levels");
  conv_cmd->add_option("--dt0", conv_dt0, "time mode: coarsest step; space mode: fixed step");
  conv_cmd->add_option("--nx0", conv_nx0, "time mode: fixed mesh; space mode: coarsest mesh");
  conv_cmd->add_option("--ny0", conv_ny0, "cells along y at the first level");
  conv_cmd->add_option("--T", conv_T, "final time");
  conv_cmd->add_option("--kind", conv_kind, "mesh generator kind");
  conv_cmd->add_option("--treatment", conv_treatment, "em, im, heim1, or heim2");
  conv_cmd->add_option("--out-dir", conv_dir, "output directory");
  conv_cmd->add_flag("--serial", conv_serial, "single-threaded execution");

  // report
  auto* report_cmd = app.add_subcommand("report", "tabulate one or more run summaries");
  std::vector<std::string> report_inputs;
  std::string report_csv;
  report_cmd->add_option("summaries", report_inputs, "summary.json files");
  report_cmd->add_option("--csv", report_csv, "also write the table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (mesh_cmd->parsed())
      return cmd_mesh(mesh_kind, mesh_nx, mesh_ny, mesh_rect, mesh_import, mesh_out);
    if (diag_cmd->parsed())
      return cmd_diagnose(diag_mesh, diag_diffusion,
                          diag_serial ? Exec::serial : Exec::parallel);
    if (solve_cmd->parsed())
      return run_solve(solve_config, solve_mesh, s_problem, s_treatment, s_lumping, s_dt, s_T,
                       s_enforce, s_tol, s_max_iter, s_apriori, s_dir, s_formats, s_heat_width,
                       solve_serial);
    if (conv_cmd->parsed())
      return cmd_converge(conv_problem, conv_mode, conv_levels, conv_dt0, conv_nx0, conv_ny0,
                          conv_T, conv_kind, conv_treatment, conv_dir,
                          conv_serial ? Exec::serial : Exec::parallel);
    if (report_cmd->parsed()) return cmd_report(report_inputs, report_csv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mesh_cmd->parsed() || diag_cmd->parsed() || report_cmd->parsed() ? kExitParse : 1;
  }
  return 0;
}
