#pragma once

#include "ma/grid.hpp"
#include "ma/sparse.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ma {

struct LinearSolveOptions {
  double tolerance = 1e-10;              ///< on ||Ax - b||_2 / ||b||_2
  std::size_t direct_limit = 400000;     ///< above this many unknowns use the iterative path
  int max_iterations = 2000;             ///< iterative path only
  int refinement_steps = 2;              ///< iterative refinement after a direct solve
};

struct LinearSolveReport {
  std::string method;
  int iterations = 0;            ///< 0 for a direct factorization without refinement
  double relative_residual = 0.0;
  bool success = false;
  std::string message;
};

struct LinearSolveResult {
  std::vector<double> x;
  LinearSolveReport report;
};

/// Solves A x = b. Sparse LU for moderate sizes, ILUT-preconditioned
/// BiCGSTAB above `direct_limit`. The reported residual is recomputed with
/// SparseMatrix::multiply, independently of the backend.
LinearSolveResult solve_linear(const SparseMatrix& a, std::span<const double> b,
                               const LinearSolveOptions& options = {});

/// Discrete Laplacian (5-point in 2D, 7-point in 3D) over the interior unknowns.
SparseMatrix laplacian_matrix(const GridSpec& grid);

/// Dirichlet Poisson solver with the factorization of the Laplacian cached,
/// so repeated solves on one grid (semi-implicit iteration) are cheap.
class PoissonSolver {
 public:
  explicit PoissonSolver(const GridSpec& grid);
  ~PoissonSolver();
  PoissonSolver(PoissonSolver&&) noexcept;
  PoissonSolver& operator=(PoissonSolver&&) noexcept;

  /// u = g on the boundary, discrete Laplacian of u = rhs at interior points.
  /// Throws LinearSolveError if the solve misses its tolerance.
  [[nodiscard]] GridFunction solve(const GridFunction& rhs, const BoundaryData& g) const;

  [[nodiscard]] const GridSpec& grid() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GridFunction solve_poisson(const GridSpec& grid, const GridFunction& rhs, const BoundaryData& g);

}  // namespace ma
