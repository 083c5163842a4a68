// ma-solve: run single solves, convergence studies, and export problem data.

#include "ma/errors.hpp"
#include "ma/problems.hpp"
#include "ma/reporting.hpp"
#include "ma/solvers.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw ma::DataError("cannot open " + path.string() + " for writing");
  return os;
}

struct RunArgs {
  std::string problem;
  int n = 31;
  std::string scheme = "hybrid";
  std::string solver = "newton";
  int stencil_width = 0;
  std::string out;
  bool undamped = false;
  double dt_factor = 0.1;
  int max_iters = -1;
};

int run(const RunArgs& args) {
  const ma::Problem problem = ma::get_problem(args.problem);
  const ma::GridSpec grid = ma::make_grid(problem.dim, args.n);
  ma::SolverConfig config;
  config.scheme = ma::parse_scheme(args.scheme);
  config.stencil_width = args.stencil_width;
  config.damped = !args.undamped;
  config.explicit_dt_factor = args.dt_factor;
  const ma::SolverKind kind = ma::parse_solver(args.solver);
  if (args.max_iters >= 0) {
    config.max_newton_iters = args.max_iters;
    config.max_explicit_iters = args.max_iters;
    config.max_semi_implicit_iters = args.max_iters;
  }

  const ma::SolveResult result = ma::solve(problem, grid, config, kind);
  const double err = problem.exact ? ma::max_error(result.u, *problem.exact) : std::nan("");
  std::printf("%s n=%d scheme=%s solver=%s iterations=%d seconds=%.3f max_error=%.4e residual=%.3e %s\n",
              problem.name.c_str(), args.n, args.scheme.c_str(), args.solver.c_str(), result.report.iterations,
              result.report.seconds, err, result.report.final_residual(),
              std::string(ma::to_string(result.report.termination)).c_str());

  if (!args.out.empty()) {
    const fs::path dir(args.out);
    fs::create_directories(dir);
    {
      auto os = open_output(dir / "solution.csv");
      ma::write_csv(os, result.u, "u");
    }
    {
      auto os = open_output(dir / "report.json");
      os << result.report.to_json() << '\n';
    }
    if (grid.dim() == 2) {
      auto os = open_output(dir / "gradient_map.csv");
      ma::write_gradient_map(os, ma::gradient_map(result.u));
    }
  }
  return result.report.termination == ma::Termination::linear_failure ? 2 : 0;
}

int study(const std::string& config_path, const std::string& out) {
  std::ifstream is(config_path);
  if (!is) throw ma::ConfigError("cannot open study config " + config_path);
  ma::StudyConfig config = ma::parse_study_config(is);
  if (!out.empty()) config.output = out;
  const auto rows = ma::run_study(config);
  ma::write_study_csv(std::cout, rows);
  for (const auto& row : rows) {
    if (row.termination == ma::to_string(ma::Termination::linear_failure)) return 2;
  }
  return 0;
}

int export_problem(const std::string& name, int n, const std::string& out) {
  const ma::Problem problem = ma::get_problem(name);
  const ma::GridSpec grid = ma::make_grid(problem.dim, n);
  const fs::path dir(out);
  fs::create_directories(dir);
  {
    auto os = open_output(dir / "f.csv");
    ma::write_csv(os, problem.rhs(grid), "f");
  }
  if (problem.exact) {
    auto os = open_output(dir / "exact.csv");
    ma::write_csv(os, ma::sample(grid, *problem.exact), "u");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference solver for the Dirichlet Monge-Ampere equation"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Solve one catalog problem");
  run_cmd->add_option("--problem", run_args.problem, "Catalog name (see list-problems)")->required();
  run_cmd->add_option("--n", run_args.n, "Points per side, boundary included");
  run_cmd->add_option("--scheme", run_args.scheme, "standard | monotone | hybrid");
  run_cmd->add_option("--solver", run_args.solver, "newton | explicit | semi-implicit");
  run_cmd->add_option("--stencil-width", run_args.stencil_width, "Monotone stencil width (0: 2 in 2D, 1 in 3D)");
  run_cmd->add_option("--out", run_args.out, "Directory for solution.csv, report.json, gradient_map.csv");
  run_cmd->add_flag("--undamped", run_args.undamped, "Always take full Newton steps");
  run_cmd->add_option("--dt-factor", run_args.dt_factor, "Explicit time step as a multiple of h^2");
  run_cmd->add_option("--max-iters", run_args.max_iters, "Override the iteration cap of the chosen solver");

  std::string config_path;
  std::string study_out;
  auto* study_cmd = app.add_subcommand("study", "Run a convergence study from a key-value config");
  study_cmd->add_option("--config", config_path, "Study config file")->required();
  study_cmd->add_option("--out", study_out, "CSV path (overrides `output` in the config)");

  auto* list_cmd = app.add_subcommand("list-problems", "List the problem catalog");

  std::string export_name;
  int export_n = 31;
  std::string export_out = ".";
  auto* export_cmd = app.add_subcommand("export", "Write f.csv and exact.csv for a problem");
  export_cmd->add_option("--problem", export_name, "Catalog name")->required();
  export_cmd->add_option("--n", export_n, "Points per side");
  export_cmd->add_option("--out", export_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(run_args);
    if (*study_cmd) return study(config_path, study_out);
    if (*export_cmd) return export_problem(export_name, export_n, export_out);
    if (*list_cmd) {
      for (const auto& name : ma::problem_names()) {
        const ma::Problem p = ma::get_problem(name);
        std::printf("%-10s %dD  %s\n", name.c_str(), p.dim, p.description.c_str());
      }
    }
  } catch (const ma::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
