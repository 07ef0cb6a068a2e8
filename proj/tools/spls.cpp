// Command line driver: convergence studies, mesh validation and stability
// estimates for the saddle point least squares solver.

#include "spls/spls.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

namespace {

struct OutputPaths {
  std::string out_dir, csv, markdown, svg, residuals;
};

void add_problem_options(CLI::App* cmd, spls::RunConfig& cfg) {
  cmd->add_option("--problem", cfg.problem,
                  "Benchmark: intersecting, singular, cube or oscillatory")
      ->capture_default_str();
  cmd->add_option("--c", cfg.c, "Quadrant contrast (intersecting)")
      ->capture_default_str();
  cmd->add_option("--k", cfg.k, "Subdomain contrast (singular, cube)")
      ->capture_default_str();
  cmd->add_option("--eps", cfg.eps, "Coefficient period (oscillatory)")
      ->capture_default_str();
  cmd->add_option("--P,--p", cfg.P, "Coefficient amplitude (oscillatory)")
      ->capture_default_str();
  cmd->add_option("--levels,--level", cfg.levels, "Number of refinement levels")
      ->capture_default_str();
  cmd->add_option("--initial-n", cfg.initial_n,
                  "Intervals per side of the level-1 mesh (0 = problem default)")
      ->capture_default_str();
  cmd->add_option("--mesh-pattern", cfg.pattern,
                  "Diagonal pattern of 2d meshes: uniform or center-symmetric "
                  "(empty = problem default)");
  cmd->add_flag("--graded", cfg.graded, "Grade refinement toward the singular point");
  cmd->add_option_function<std::string>(
         "--refine",
         [&cfg](const std::string& mode) {
           if (mode == "graded")
             cfg.graded = true;
           else if (mode == "uniform")
             cfg.graded = false;
           else
             throw CLI::ValidationError("--refine",
                                        "expected uniform or graded, got '" + mode +
                                            "'");
         },
         "Refinement rule: uniform or graded")
      ->type_name("TEXT");
  cmd->add_option("--kappa", cfg.kappa, "Graded edge split ratio in (0, 1/2]")
      ->capture_default_str();
}

void add_solver_options(CLI::App* cmd, spls::RunConfig& cfg, std::string& variant,
                        std::string& trial) {
  cmd->add_option("--variant,--algorithm", variant, "Update rule: u, ug or ucg")
      ->capture_default_str();
  cmd->add_option("--trial", trial, "Trial space: projection or no-projection")
      ->capture_default_str();
  cmd->add_option("--tol", cfg.tol, "Residual norm stopping tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "Iteration budget per level")
      ->capture_default_str();
  cmd->add_option("--budgets", cfg.budgets,
                  "Per-level iteration caps (one per level); capped levels may "
                  "stop before tol")
      ->delimiter(',');
  cmd->add_option("--alpha0", cfg.alpha0, "Fixed step for variant u (0 = 1/a_max)")
      ->capture_default_str();
  cmd->add_option_function<int>(
         "--quad",
         [&cfg](int degree) {
           cfg.quad_bilinear = degree;
           cfg.quad_load = degree;
         },
         "Assembly quadrature degree for both coupling/mass and load terms")
      ->type_name("INT");
  cmd->add_option("--quad-bilinear", cfg.quad_bilinear,
                  "Quadrature degree for coupling and mass terms (0 = default)")
      ->capture_default_str();
  cmd->add_option("--quad-load", cfg.quad_load,
                  "Quadrature degree for the load (0 = default)")
      ->capture_default_str();
  cmd->add_option("--quad-error", cfg.quad_error,
                  "Quadrature degree for the flux error (0 = default)")
      ->capture_default_str();
}

int cmd_run(const spls::RunConfig& cfg, const OutputPaths& out, bool quiet) {
  auto print_row = [quiet](const spls::LevelRow& row) {
    if (quiet) return;
    std::printf("level %d  h %.4g  dofs %d  error %.6g  rate %.3f  it %d  res %.2e\n",
                row.level, row.h, row.n_free, row.error, row.rate, row.iterations,
                row.residual);
    std::fflush(stdout);
  };
  const spls::ExperimentResult result = spls::run_experiment(cfg, print_row);
  if (!out.out_dir.empty()) {
    std::filesystem::create_directories(out.out_dir);
    const std::filesystem::path dir(out.out_dir);
    spls::write_text_file((dir / "table.csv").string(), spls::csv_string(result));
    spls::write_text_file((dir / "table.md").string(), spls::markdown_string(result));
    spls::write_text_file((dir / "plot.svg").string(), spls::svg_string(result));
    spls::write_text_file((dir / "residuals.csv").string(),
                          spls::residuals_csv_string(result));
  }
  if (!out.csv.empty()) spls::write_text_file(out.csv, spls::csv_string(result));
  if (!out.markdown.empty())
    spls::write_text_file(out.markdown, spls::markdown_string(result));
  if (!out.svg.empty()) spls::write_text_file(out.svg, spls::svg_string(result));
  if (!out.residuals.empty())
    spls::write_text_file(out.residuals, spls::residuals_csv_string(result));
  return 0;
}

int cmd_validate(const std::string& path) {
  const spls::Mesh mesh = spls::read_mesh_text(path);
  const auto issues = spls::validate(mesh);
  for (const auto& issue : issues) std::cout << "issue: " << issue << "\n";
  if (!issues.empty()) return 1;
  std::cout << "ok: " << mesh.n_vertices() << " vertices, " << mesh.n_cells()
            << " cells, dim " << mesh.dim << "\n";
  return 0;
}

int cmd_estimate(const spls::RunConfig& cfg, const std::string& csv_path, bool quiet) {
  const spls::ProblemSpec prob = spls::make_problem_from_config(cfg);
  if (cfg.graded && !prob.has_singular_point)
    throw std::invalid_argument("problem '" + prob.name + "' has no singular point");
  const int n0 = cfg.initial_n > 0 ? cfg.initial_n : prob.default_initial_n;
  const int qb = cfg.quad_bilinear > 0 ? cfg.quad_bilinear : prob.quad_bilinear;
  spls::Mesh mesh = prob.initial_mesh(n0);
  std::string csv = "level,free_dofs,m_h,m_h0,c_hat\n";
  for (int level = 1; level <= cfg.levels; ++level) {
    if (level > 1) {
      if (cfg.graded) {
        const int sv = spls::find_vertex(mesh, prob.singular_point);
        if (sv < 0) throw std::runtime_error("singular point is not a mesh vertex");
        mesh = spls::graded_refine(mesh, sv, cfg.kappa);
      } else {
        mesh = spls::uniform_refine(mesh);
      }
    }
    const auto V = spls::build_test_space(mesh);
    const auto W = spls::build_broken_space(mesh);
    const auto sys = spls::assemble_system(mesh, V, W, prob.A,
                                           [](const std::array<double, 3>&) { return 0.0; },
                                           qb, 2);
    const spls::SystemOperators ops(sys);
    const auto est = spls::estimate_stability(sys, ops);
    if (!quiet)
      std::printf("level %d  dofs %d  m_h %.6f  m_h0 %.6f  c_hat %.6f\n", level,
                  sys.n_free, est.m_h, est.m_h0, est.c_hat);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d,%d,%.12g,%.12g,%.12g\n", level, sys.n_free,
                  est.m_h, est.m_h0, est.c_hat);
    csv += buf;
  }
  if (!csv_path.empty()) spls::write_text_file(csv_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saddle point least squares solver for diffusion interface problems"};
  app.require_subcommand(1);
  app.set_config("--config");

  spls::RunConfig cfg;
  std::string variant = "ucg", trial = "projection";
  OutputPaths out;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Run a convergence study");
  add_problem_options(run, cfg);
  add_solver_options(run, cfg, variant, trial);
  run->add_option("--out", out.out_dir,
                  "Directory for table.csv, table.md, plot.svg and residuals.csv");
  run->add_option("--csv", out.csv, "Write the level table as CSV");
  run->add_option("--markdown", out.markdown, "Write the level table as Markdown");
  run->add_option("--svg", out.svg, "Write a log-log error plot as SVG");
  run->add_option("--residuals", out.residuals, "Write residual histories as CSV");
  run->add_flag("--quiet", quiet, "Suppress per-level progress output");

  std::string mesh_path;
  CLI::App* validate = app.add_subcommand("validate-mesh", "Check a mesh file");
  validate->add_option("mesh", mesh_path, "Mesh in plain text format")->required();

  spls::RunConfig ecfg;
  std::string est_csv;
  bool equiet = false;
  CLI::App* estimate =
      app.add_subcommand("estimate", "Compute stability constants per level");
  add_problem_options(estimate, ecfg);
  estimate->add_option("--quad-bilinear", ecfg.quad_bilinear,
                       "Quadrature degree for coupling and mass terms (0 = default)");
  estimate->add_option("--csv", est_csv, "Write the estimates as CSV");
  estimate->add_flag("--quiet", equiet, "Suppress per-level output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      cfg.variant = spls::variant_from_string(variant);
      cfg.trial = spls::trial_mode_from_string(trial);
      return cmd_run(cfg, out, quiet);
    }
    if (app.got_subcommand(validate)) return cmd_validate(mesh_path);
    if (app.got_subcommand(estimate)) return cmd_estimate(ecfg, est_csv, equiet);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
