#include "ma/linsolve.hpp"

#include "ma/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ma {

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using EigenVector = Eigen::VectorXd;

EigenSparse to_eigen(const SparseMatrix& a) {
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(a.nnz());
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(cols[k]), vals[k]);
    }
  }
  EigenSparse m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> residual_vector(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  std::vector<double> r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

}  // namespace

LinearSolveResult solve_linear(const SparseMatrix& a, std::span<const double> b, const LinearSolveOptions& options) {
  if (a.rows() != a.cols()) throw DataError("solve_linear: matrix is not square");
  if (b.size() != a.rows()) throw DataError("solve_linear: right-hand side length mismatch");

  LinearSolveResult out;
  out.x.assign(a.rows(), 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.report = {"trivial", 0, 0.0, true, "zero right-hand side"};
    return out;
  }

  const EigenSparse m = to_eigen(a);
  const Eigen::Map<const EigenVector> rhs(b.data(), static_cast<Eigen::Index>(b.size()));

  if (a.rows() <= options.direct_limit) {
    out.report.method = "sparse-lu";
    Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success) {
      out.report.message = "factorization failed: " + lu.lastErrorMessage();
      out.report.relative_residual = 1.0;
      return out;
    }
    EigenVector x = lu.solve(rhs);
    Eigen::Map<EigenVector>(out.x.data(), static_cast<Eigen::Index>(out.x.size())) = x;
    double rel = norm2(residual_vector(a, out.x, b)) / bnorm;
    for (int step = 0; step < options.refinement_steps && rel > 1e-2 * options.tolerance; ++step) {
      const std::vector<double> r = residual_vector(a, out.x, b);
      const EigenVector dx = lu.solve(Eigen::Map<const EigenVector>(r.data(), static_cast<Eigen::Index>(r.size())));
      for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += dx[static_cast<Eigen::Index>(i)];
      ++out.report.iterations;
      rel = norm2(residual_vector(a, out.x, b)) / bnorm;
    }
    out.report.relative_residual = rel;
  } else {
    out.report.method = "bicgstab-ilut";
    Eigen::BiCGSTAB<EigenSparse, Eigen::IncompleteLUT<double, int>> solver;
    solver.setTolerance(options.tolerance * 0.1);
    solver.setMaxIterations(options.max_iterations);
    solver.compute(m);
    if (solver.info() != Eigen::Success) {
      out.report.message = "preconditioner setup failed";
      out.report.relative_residual = 1.0;
      return out;
    }
    EigenVector x = solver.solve(rhs);
    Eigen::Map<EigenVector>(out.x.data(), static_cast<Eigen::Index>(out.x.size())) = x;
    out.report.iterations = static_cast<int>(solver.iterations());
    out.report.relative_residual = norm2(residual_vector(a, out.x, b)) / bnorm;
  }

  const bool finite = std::all_of(out.x.begin(), out.x.end(), [](double v) { return std::isfinite(v); });
  out.report.success = finite && out.report.relative_residual <= options.tolerance;
  if (!out.report.success) {
    std::ostringstream msg;
    msg << "relative residual " << out.report.relative_residual << " above tolerance " << options.tolerance;
    out.report.message = msg.str();
  }
  return out;
}

SparseMatrix laplacian_matrix(const GridSpec& grid) {
  const InteriorIndex interior(grid);
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  RowAssembler row(interior.size(), interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const std::size_t p = interior.flat(i);
    const MultiIndex c = grid.multi_index(p);
    row.add(i, -2.0 * grid.dim() * inv_h2);
    for (int a = 0; a < grid.dim(); ++a) {
      for (int s : {-1, 1}) {
        MultiIndex m = c;
        m[a] += s;
        const auto ord = interior.ordinal(grid.flat_index(m));
        if (ord >= 0) row.add(static_cast<std::size_t>(ord), inv_h2);
      }
    }
    row.finish_row();
  }
  return std::move(row).build();
}

struct PoissonSolver::Impl {
  GridSpec grid;
  InteriorIndex interior;
  SparseMatrix laplacian;
  Eigen::SimplicialLDLT<EigenSparse> factor;  // of the negated Laplacian (SPD)

  explicit Impl(const GridSpec& g) : grid(g), interior(g), laplacian(laplacian_matrix(g)) {
    EigenSparse neg = -to_eigen(laplacian);
    factor.compute(neg);
    if (factor.info() != Eigen::Success) throw LinearSolveError("Poisson factorization failed");
  }
};

PoissonSolver::PoissonSolver(const GridSpec& grid) : impl_(std::make_unique<Impl>(grid)) {}
PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;
PoissonSolver& PoissonSolver::operator=(PoissonSolver&&) noexcept = default;

const GridSpec& PoissonSolver::grid() const noexcept { return impl_->grid; }

GridFunction PoissonSolver::solve(const GridFunction& rhs, const BoundaryData& g) const {
  const GridSpec& grid = impl_->grid;
  if (!(rhs.grid() == grid)) throw ConfigError("Poisson solve: right-hand side lives on another grid");
  const InteriorIndex& interior = impl_->interior;
  const double inv_h2 = 1.0 / (grid.h() * grid.h());

  GridFunction u = g.apply(GridFunction(grid));
  std::vector<double> b(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const std::size_t p = interior.flat(i);
    const MultiIndex c = grid.multi_index(p);
    double v = rhs[p];
    for (int a = 0; a < grid.dim(); ++a) {
      for (int s : {-1, 1}) {
        MultiIndex m = c;
        m[a] += s;
        const std::size_t q = grid.flat_index(m);
        if (grid.is_boundary(q)) v -= u[q] * inv_h2;
      }
    }
    b[i] = v;
  }

  const double bnorm = norm2(b);
  if (bnorm == 0.0) return u;

  EigenVector neg_b = -Eigen::Map<const EigenVector>(b.data(), static_cast<Eigen::Index>(b.size()));
  const EigenVector x = impl_->factor.solve(neg_b);
  std::vector<double> xs(x.data(), x.data() + x.size());
  const double rel = norm2(residual_vector(impl_->laplacian, xs, b)) / bnorm;
  if (!(rel <= 1e-10)) {
    std::ostringstream msg;
    msg << "Poisson solve: relative residual " << rel;
    throw LinearSolveError(msg.str());
  }
  for (std::size_t i = 0; i < interior.size(); ++i) u[interior.flat(i)] = xs[i];
  return u;
}

GridFunction solve_poisson(const GridSpec& grid, const GridFunction& rhs, const BoundaryData& g) {
  return PoissonSolver(grid).solve(rhs, g);
}

}  // namespace ma
