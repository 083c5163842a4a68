#pragma once

#include "ma/grid.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ma {

/// Dirichlet problem det(D^2 u) = f on the unit box with u = g on the boundary.
struct Problem {
  std::string name;
  std::string description;
  int dim = 2;
  Point center{0.5, 0.5, 0.5};

  /// Closed-form right-hand side. Empty when f is a measure that only
  /// exists as a grid-dependent approximation (see `rhs_on_grid`).
  Field f;
  /// Builds f on a specific grid; set only for grid-dependent data.
  std::function<GridFunction(const GridSpec&)> rhs_on_grid;
  Field g;
  std::optional<Field> exact;

  /// Distances from `center` at which the exact solution fails to be C^2.
  std::vector<double> kink_radii;

  /// Per boundary face (x=0, x=1, y=0, y=1, z=0, z=1): true when g is C^{2,alpha} there.
  std::vector<bool> boundary_smooth;

  [[nodiscard]] bool f_is_grid_dependent() const noexcept { return static_cast<bool>(rhs_on_grid); }

  /// f sampled (or constructed) on the grid.
  [[nodiscard]] GridFunction rhs(const GridSpec& grid) const;
  [[nodiscard]] BoundaryData boundary() const { return BoundaryData::from_field(g); }
};

/// Names accepted by get_problem, in catalog order.
std::vector<std::string> problem_names();

/// Catalog lookup; throws ConfigError for unknown names.
Problem get_problem(const std::string& name);
/// As above, and checks that the grid dimension matches.
Problem get_problem(const std::string& name, const GridSpec& grid);

/// Average of `mass` times a Dirac measure at x0 over the ball of radius h/2:
/// mass / (pi (h/2)^2) at lattice points within h/2 of x0, zero elsewhere.
struct DiracApproximation {
  GridFunction density;
  std::size_t support_size = 0;  ///< 0 means no lattice point fell inside the ball
};
DiracApproximation dirac_approximation(const GridSpec& grid, const Point& x0, double mass);

/// Compares det of a finite-difference Hessian of the exact solution with f.
struct ConsistencyReport {
  bool passed = true;
  std::size_t checked = 0;
  double max_relative_error = 0.0;
  Point worst_point{0.0, 0.0, 0.0};
  std::string message;
};

/// Samples `samples` random interior points (seeded, away from known kinks)
/// and checks |det D^2 exact - f| <= tol * max(1, |f|). Throws ConfigError if
/// the problem has no exact solution.
ConsistencyReport verify_consistency(const Problem& problem, int samples, std::uint64_t seed = 7,
                                     double tol = 1e-6);

}  // namespace ma
