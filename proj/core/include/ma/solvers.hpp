#pragma once

#include "ma/discretization.hpp"
#include "ma/linearization.hpp"
#include "ma/linsolve.hpp"
#include "ma/problems.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ma {

enum class Scheme { standard, monotone, hybrid };
enum class SolverKind { newton, explicit_euler, semi_implicit };
enum class Termination { converged, max_iters, damping_exhausted, linear_failure, diverged };

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(SolverKind s) noexcept;
std::string_view to_string(Termination t) noexcept;
/// Parse the CLI spellings; throw ConfigError otherwise.
Scheme parse_scheme(std::string_view s);
SolverKind parse_solver(std::string_view s);

struct SolverConfig {
  Scheme scheme = Scheme::hybrid;
  /// Monotone stencil width; 0 picks 2 in 2D (17 points) and 1 in 3D (19 points).
  int stencil_width = 0;

  int max_newton_iters = 100;
  double newton_tol = 1e-8;       ///< max-norm of scheme value minus f
  double min_damping = 1.0 / 1024.0;
  bool damped = true;             ///< false: always take the full Newton step
  std::optional<double> eps_reg;  ///< Jacobian floor; default 1e-8 / (2 h^2)
  /// When no damping factor helps, retry with (J - sigma I), sigma = 10^(k-5) max|diag J|, k = 1..levels.
  int max_shift_levels = 8;
  /// A plain step accepted only below this damping also tries the shifted systems; the best wins.
  double shift_trigger = 1.0 / 16.0;
  /// Monotone and hybrid only: each trial iterate is replaced by its directional convex
  /// envelope, and (hybrid) rejected if it loses axis convexity where the standard part acts.
  bool convexity_safeguard = true;
  double convexity_slack = 1e-6;
  double projection_tol = 1e-13;

  std::optional<double> weight_eps;  ///< singular-set threshold; default h
  double weight_ramp = 2.0;

  double explicit_dt_factor = 0.1;  ///< dt = factor * h^2
  int max_explicit_iters = 200000;

  int max_semi_implicit_iters = 1000;
  double semi_implicit_tol = 1e-8;  ///< on the max-norm change between iterates

  int coarse_n = 0;  ///< initialization grid size, capped at the target n; 0 means the target grid

  /// Throws ConfigError for non-positive tolerances, min_damping outside (0,1], etc.
  void validate() const;
  [[nodiscard]] int width_for(int dim) const noexcept { return stencil_width > 0 ? stencil_width : (dim == 2 ? 2 : 1); }
};

struct SolveReport {
  int iterations = 0;
  /// Max-norm residual before the first step and after every accepted step.
  std::vector<double> residual_history;
  /// Damping factor used by each accepted Newton step.
  std::vector<double> damping;
  /// Diagonal shift sigma of (J - sigma I) used by each accepted Newton step; 0 for a plain step.
  std::vector<double> shift;
  /// Max-norm of each update (semi-implicit stopping quantity).
  std::vector<double> update_history;
  double seconds = 0.0;       ///< wall time of the whole solve including initialization
  double init_seconds = 0.0;
  Termination termination = Termination::max_iters;
  std::string message;

  [[nodiscard]] bool converged() const noexcept { return termination == Termination::converged; }
  [[nodiscard]] double final_residual() const noexcept {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
  [[nodiscard]] std::string to_json() const;
  static std::string csv_header();
  [[nodiscard]] std::string csv_row(int n) const;
};

struct SolveResult {
  GridFunction u;
  SolveReport report;
};

/// Residual and Jacobian of one scheme with its data frozen (f, g, stencil, w).
class SchemeOperator {
 public:
  SchemeOperator(const Problem& problem, const GridSpec& grid, const SolverConfig& config);
  SchemeOperator(Scheme scheme, GridFunction f, BoundaryData g, StencilBasisSet bases, WeightField weights,
                 double eps_reg);

  [[nodiscard]] Residual residual(const GridFunction& u) const;
  [[nodiscard]] SparseMatrix jacobian(const GridFunction& u, const Residual& residual) const;

  [[nodiscard]] Scheme scheme() const noexcept { return scheme_; }
  [[nodiscard]] const GridSpec& grid() const noexcept { return f_.grid(); }
  [[nodiscard]] const GridFunction& f() const noexcept { return f_; }
  [[nodiscard]] const BoundaryData& boundary() const noexcept { return g_; }
  [[nodiscard]] const StencilBasisSet& bases() const noexcept { return bases_; }
  [[nodiscard]] const WeightField& weights() const noexcept { return weights_; }
  [[nodiscard]] double eps_reg() const noexcept { return eps_reg_; }

 private:
  Scheme scheme_;
  GridFunction f_;
  BoundaryData g_;
  StencilBasisSet bases_;
  WeightField weights_;
  double eps_reg_;
};

struct ConvexifyOptions {
  double tolerance = 1e-10;  ///< stop when the largest update falls below this
  int max_sweeps = 10000;
};

/// Reusable form of convexify: the arm stencils are built once per grid.
class ConvexProjector {
 public:
  ConvexProjector(const GridSpec& grid, std::span<const Direction> directions, const BoundaryData& g);
  [[nodiscard]] GridFunction operator()(GridFunction u, const ConvexifyOptions& options = {}) const;

 private:
  struct Arm {
    static constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::size_t plus = none;
    std::size_t minus = none;
    double plus_sample = 0.0;
    double minus_sample = 0.0;
    double a = 0.0;
    double b = 0.0;
  };
  InteriorIndex interior_;
  std::size_t per_point_;
  std::vector<Arm> arms_;
};

/// Largest grid function below u whose second differences along every
/// direction are nonnegative, by Gauss-Seidel sweeps of
///   u(x) <- min(u(x), min_nu average of u along the nu arms at x).
/// Boundary values stay fixed; arms cut by the boundary use g there.
GridFunction convexify(const GridFunction& u, std::span<const Direction> directions, const BoundaryData& g,
                       const ConvexifyOptions& options = {});

/// Initial Newton iterate: Poisson solve with right-hand side sqrt(d! f) on a
/// coarse grid, convexified, interpolated to `grid`, boundary reset to g.
GridFunction initialize(const Problem& problem, const GridSpec& grid, const SolverConfig& config);

/// Damped Newton iteration u <- u - alpha du with J du = F[u] - f. alpha is
/// halved from 1 until the residual max-norm strictly decreases; if none
/// does, the system is re-solved with a growing diagonal shift.
SolveResult newton_solve(const Problem& problem, const GridSpec& grid, const SolverConfig& config,
                         std::optional<GridFunction> initial = std::nullopt);
SolveResult newton_solve(const SchemeOperator& op, GridFunction initial, const SolverConfig& config);

/// Forward Euler on the parabolic equation u_t = F[u] - f with dt = c h^2.
/// Requires the monotone or hybrid scheme.
SolveResult explicit_solve(const Problem& problem, const GridSpec& grid, const SolverConfig& config,
                           std::optional<GridFunction> initial = std::nullopt);

/// 2D semi-implicit iteration: Laplacian(u_next) = sqrt(2 f + |D^2 u|^2), with
/// |D^2 u|^2 = u_xx^2 + u_yy^2 + 2 u_xy^2. Stops on the max-norm change.
SolveResult semi_implicit_solve_2d(const Problem& problem, const GridSpec& grid, const SolverConfig& config,
                                   std::optional<GridFunction> initial = std::nullopt);

/// Dispatch on SolverKind.
SolveResult solve(const Problem& problem, const GridSpec& grid, const SolverConfig& config, SolverKind kind);

}  // namespace ma
