#pragma once

#include "spls/analysis.hpp"
#include "spls/problems.hpp"
#include "spls/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spls {

// One full convergence study: a problem instance, a refinement schedule and
// solver settings. initial_n == 0 and quad_* == 0 defer to the problem, and
// an empty pattern keeps the problem's own triangulation default. A nonempty
// budgets vector caps the solver at budgets[level-1] iterations per level;
// budgeted levels may stop before reaching tol, which reproduces published
// iteration-count protocols.
struct RunConfig {
  std::string problem = "intersecting";
  double c = 1.0 / 3.0;  // intersecting quadrant contrast
  double k = 5.0;        // singular / cube contrast
  double eps = 0.4;      // oscillatory coefficient period
  double P = 1.8;        // oscillatory coefficient amplitude
  int levels = 5;
  int initial_n = 0;
  std::string pattern;  // "", "uniform" or "center-symmetric"
  bool graded = false;
  double kappa = 0.2;  // edge split ratio toward the singular point
  Variant variant = Variant::UCG;
  TrialMode trial = TrialMode::Projection;
  double tol = 1e-10;
  int max_iter = 2000;
  std::vector<int> budgets;  // per-level iteration caps, empty = none
  double alpha0 = 0;
  int quad_bilinear = 0;
  int quad_load = 0;
  int quad_error = 0;
};

inline ProblemSpec make_problem_from_config(const RunConfig& cfg) {
  const bool has_pattern = !cfg.pattern.empty();
  const DiagonalPattern pat =
      has_pattern ? diagonal_pattern_from_string(cfg.pattern) : DiagonalPattern::Uniform;
  if (cfg.problem == "intersecting")
    return has_pattern ? make_intersecting_problem(cfg.c, pat)
                       : make_intersecting_problem(cfg.c);
  if (cfg.problem == "singular")
    return has_pattern ? make_singular_problem(cfg.k, pat) : make_singular_problem(cfg.k);
  if (cfg.problem == "cube") {
    if (has_pattern)
      throw std::invalid_argument("cube: the 3d mesh has no diagonal pattern");
    return make_cube_problem(cfg.k);
  }
  if (cfg.problem == "oscillatory")
    return has_pattern ? make_oscillatory_problem(cfg.eps, cfg.P, pat)
                       : make_oscillatory_problem(cfg.eps, cfg.P);
  throw std::invalid_argument(
      "unknown problem '" + cfg.problem +
      "' (expected intersecting, singular, cube or oscillatory)");
}

struct LevelRow {
  int level = 0;
  double h = 0;
  int n_free = 0;
  int n_trial = 0;
  double error = 0;
  double rate = 0;
  int iterations = 0;
  double residual = 0;
  double u_norm = 0;
};

struct ExperimentResult {
  RunConfig cfg;
  std::vector<LevelRow> rows;
  std::vector<std::vector<double>> residual_histories;
};

// Runs the study level by level, refining between levels (graded toward the
// problem's singular point when requested). Without per-level budgets any
// level that fails to converge within max_iter throws; with budgets the
// solver simply stops at the cap and the row records where it stood.
template <class LevelCallback>
ExperimentResult run_experiment(const RunConfig& cfg, LevelCallback&& on_level) {
  const ProblemSpec prob = make_problem_from_config(cfg);
  if (cfg.graded && !prob.has_singular_point)
    throw std::invalid_argument("run_experiment: problem '" + prob.name +
                                "' has no singular point to grade toward");
  if (cfg.levels < 1) throw std::invalid_argument("run_experiment: levels must be >= 1");
  if (!cfg.budgets.empty()) {
    if (static_cast<int>(cfg.budgets.size()) != cfg.levels)
      throw std::invalid_argument("run_experiment: budgets must list one cap per level");
    for (int b : cfg.budgets)
      if (b < 1) throw std::invalid_argument("run_experiment: budgets must be >= 1");
  }

  const int n0 = cfg.initial_n > 0 ? cfg.initial_n : prob.default_initial_n;
  const int qb = cfg.quad_bilinear > 0 ? cfg.quad_bilinear : prob.quad_bilinear;
  const int ql = cfg.quad_load > 0 ? cfg.quad_load : prob.quad_load;
  const int qe = cfg.quad_error > 0 ? cfg.quad_error : prob.quad_error;

  SolverConfig scfg;
  scfg.variant = cfg.variant;
  scfg.trial = cfg.trial;
  scfg.tol = cfg.tol;
  scfg.max_iter = cfg.max_iter;
  scfg.alpha0 = cfg.alpha0;

  ExperimentResult result;
  result.cfg = cfg;
  result.cfg.initial_n = n0;

  Mesh mesh = prob.initial_mesh(n0);
  std::vector<double> errors;
  for (int level = 1; level <= cfg.levels; ++level) {
    if (level > 1) {
      if (cfg.graded) {
        const int sv = find_vertex(mesh, prob.singular_point);
        if (sv < 0)
          throw std::runtime_error("run_experiment: singular point is not a mesh vertex");
        mesh = graded_refine(mesh, sv, cfg.kappa);
      } else {
        mesh = uniform_refine(mesh);
      }
      mesh.level = level;
    }
    const ScalarP1Space V = build_test_space(mesh);
    const BrokenVectorP1Space W = build_broken_space(mesh);
    const AssembledSystem sys = assemble_system(mesh, V, W, prob.A, prob.f, qb, ql);
    const SystemOperators ops(sys);
    Vec g_full;
    if (prob.nonzero_boundary) g_full = boundary_interpolant(mesh, prob.exact_u);
    const bool budgeted = !cfg.budgets.empty();
    SolverConfig level_cfg = scfg;
    if (budgeted) level_cfg.max_iter = cfg.budgets[level - 1];
    const SplsSolution sol = solve_spls(sys, ops, V, prob.A, level_cfg,
                                        prob.nonzero_boundary ? &g_full : nullptr);
    if (!sol.report.converged && !budgeted)
      throw std::runtime_error("run_experiment: level " + std::to_string(level) +
                               " stopped at residual " +
                               std::to_string(sol.report.final_residual) + " after " +
                               std::to_string(sol.report.iterations) + " iterations");
    DiscreteFluxView view = flux_view(sol, W, prob.A);
    LevelRow row;
    row.level = level;
    row.h = max_cell_diameter(mesh);
    row.n_free = sys.n_free;
    row.n_trial = sys.n_trial;
    row.error = flux_error(prob.A, prob.exact_flux, view, qe);
    row.iterations = sol.report.iterations;
    row.residual = sol.report.final_residual;
    row.u_norm = sol.report.final_u_norm;
    errors.push_back(row.error);
    const auto rates = convergence_rates(errors);
    row.rate = rates.back();
    result.rows.push_back(row);
    result.residual_histories.push_back(sol.report.residual_history);
    on_level(result.rows.back());
  }
  return result;
}

inline ExperimentResult run_experiment(const RunConfig& cfg) {
  return run_experiment(cfg, [](const LevelRow&) {});
}

namespace detail {

inline std::string strprintf(const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

}  // namespace detail

inline std::string csv_string(const ExperimentResult& r) {
  std::string out = "level,h,error,rate,iterations,residual\n";
  for (const auto& row : r.rows)
    out += detail::strprintf("%d,%.12g,%.12g,%.3f,%d,%.3e\n", row.level, row.h,
                             row.error, row.rate, row.iterations, row.residual);
  return out;
}

inline std::string residuals_csv_string(const ExperimentResult& r) {
  std::string out = "level,iteration,residual\n";
  for (size_t l = 0; l < r.residual_histories.size(); ++l)
    for (size_t j = 0; j < r.residual_histories[l].size(); ++j)
      out += detail::strprintf("%d,%zu,%.12g\n", r.rows[l].level, j,
                               r.residual_histories[l][j]);
  return out;
}

inline std::string markdown_string(const ExperimentResult& r) {
  const bool sci = r.cfg.problem == "oscillatory";
  const bool fine = r.cfg.problem == "cube";
  std::string out;
  out += "| Level | h | Error | Rate | Iterations |\n";
  out += "|------:|--:|------:|-----:|-----------:|\n";
  for (const auto& row : r.rows) {
    const std::string err = sci    ? detail::strprintf("%.2e", row.error)
                            : fine ? detail::strprintf("%.4f", row.error)
                                   : detail::strprintf("%.3f", row.error);
    out += detail::strprintf("| %d | %.4g | %s | %.3f | %d |\n", row.level, row.h,
                             err.c_str(), row.rate, row.iterations);
  }
  return out;
}

// Log-log error-versus-h plot with a slope-2 reference segment. One circle
// marker per level with a positive error.
inline std::string svg_string(const ExperimentResult& r) {
  std::vector<double> hs, es;
  for (const auto& row : r.rows)
    if (row.error > 0 && row.h > 0) {
      hs.push_back(std::log10(row.h));
      es.push_back(std::log10(row.error));
    }
  const double W = 640, H = 480, L = 70, R = 30, T = 30, B = 50;
  std::string out = detail::strprintf(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
      "viewBox=\"0 0 %g %g\">\n",
      W, H, W, H);
  out += detail::strprintf(
      "<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n"
      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
      W, H, L, H - B, W - R, H - B, L, T, L, H - B);
  out += detail::strprintf(
      "<text x=\"%g\" y=\"%g\" font-size=\"14\">log10 h</text>\n"
      "<text x=\"14\" y=\"%g\" font-size=\"14\" transform=\"rotate(-90 14 %g)\">"
      "log10 error</text>\n",
      (L + W - R) / 2, H - 14, (T + H - B) / 2, (T + H - B) / 2);
  if (!hs.empty()) {
    double hmin = hs[0], hmax = hs[0], emin = es[0], emax = es[0];
    for (size_t i = 1; i < hs.size(); ++i) {
      hmin = std::min(hmin, hs[i]);
      hmax = std::max(hmax, hs[i]);
      emin = std::min(emin, es[i]);
      emax = std::max(emax, es[i]);
    }
    if (hmax == hmin) hmax = hmin + 1;
    if (emax == emin) emax = emin + 1;
    auto X = [&](double lh) { return L + (lh - hmin) / (hmax - hmin) * (W - L - R); };
    auto Y = [&](double le) { return H - B - (le - emin) / (emax - emin) * (H - T - B); };
    // slope-2 reference through the finest point
    const double e0 = es.back() + 2.0 * (hmax - hs.back());
    out += detail::strprintf(
        "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"gray\" "
        "stroke-dasharray=\"6 4\"/>\n",
        X(hs.back()), Y(es.back()), X(hmax), Y(e0));
    std::string path;
    for (size_t i = 0; i < hs.size(); ++i)
      path += detail::strprintf("%s%g %g", i ? " L " : "M ", X(hs[i]), Y(es[i]));
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"steelblue\"/>\n";
    for (size_t i = 0; i < hs.size(); ++i)
      out += detail::strprintf(
          "<circle cx=\"%g\" cy=\"%g\" r=\"4\" fill=\"steelblue\"/>\n", X(hs[i]),
          Y(es[i]));
  }
  out += "</svg>\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed while writing " + path);
}

}  // namespace spls
