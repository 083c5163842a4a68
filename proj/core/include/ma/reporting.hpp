#pragma once

#include "ma/grid.hpp"
#include "ma/solvers.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ma {

/// max over all lattice points of |u - exact|.
double max_error(const GridFunction& u, const Field& exact);
double max_error(const GridFunction& u, const GridFunction& exact);

struct GradientSample {
  Point source{0.0, 0.0, 0.0};
  std::array<double, 2> gradient{0.0, 0.0};
};

/// Numerical gradient map x -> grad u(x) of a 2D grid function. Centred
/// differences inside, second-order one-sided differences on the boundary.
/// With `circle_only`, keeps points in the disc inscribed in the box.
/// Throws ConfigError in 3D.
std::vector<GradientSample> gradient_map(const GridFunction& u, bool circle_only = false);
/// CSV with header x,y,gx,gy.
void write_gradient_map(std::ostream& os, const std::vector<GradientSample>& samples);

struct StudyRow {
  std::string problem;
  int n = 0;
  std::string scheme;
  std::string solver;
  int iterations = 0;
  double seconds = 0.0;
  double max_error = 0.0;  ///< NaN when the run produced no iterate
  std::string termination;

  friend bool operator==(const StudyRow&, const StudyRow&) = default;
};

/// Header: problem,n,scheme,solver,iterations,seconds,max_error,termination.
/// Reals are written with 17 significant digits so that reading them back
/// reproduces the same doubles.
void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows);
/// Throws DataError on a malformed header or row.
std::vector<StudyRow> read_study_csv(std::istream& is);

struct StudyConfig {
  std::vector<std::string> problems;
  std::vector<int> ladder;
  SolverKind solver = SolverKind::newton;
  SolverConfig solver_config;
  std::optional<std::filesystem::path> output;
};

/// Key-value text, one `key = value` per line, `#` starts a comment.
/// Keys: problems, ladder (comma separated), scheme, solver, stencil_width,
/// newton_tol, max_newton_iters, explicit_dt_factor, max_explicit_iters,
/// max_semi_implicit_iters, semi_implicit_tol, min_damping, damped,
/// convexity_safeguard, weight_eps, weight_ramp, coarse_n, output.
/// Throws ConfigError naming the offending line.
StudyConfig parse_study_config(std::istream& is);

/// Runs every (problem, n) pair in order. A run that throws or stops early
/// is recorded with its termination reason instead of aborting the study.
/// Writes the CSV to `output` when given.
std::vector<StudyRow> run_study(const std::vector<std::string>& problems, const std::vector<int>& ladder,
                                const SolverConfig& config, SolverKind solver,
                                const std::optional<std::filesystem::path>& output = std::nullopt);
std::vector<StudyRow> run_study(const StudyConfig& config);

}  // namespace ma
