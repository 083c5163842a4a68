#pragma once

#include "ma/discretization.hpp"
#include "ma/sparse.hpp"

namespace ma {

/// Default Jacobian regularization floor 1e-8 / (2 h^2).
double default_regularization(const GridSpec& grid);

/// Jacobian of the standard scheme over the interior unknowns:
/// row i is trace(adj(H_i) D^2 v), with H_i the discrete Hessian of u at i.
/// Boundary columns are dropped (boundary values are data).
SparseMatrix jacobian_standard(const GridFunction& u);

/// Danskin Jacobian of the monotone scheme at the argmin basis recorded in
/// `residual`: row i = sum_j c_j D_{nu_j}, c_j = prod_{k != j} max(D_{nu_k} u, eps_reg).
SparseMatrix jacobian_monotone(const GridFunction& u, const Residual& residual, const StencilBasisSet& bases,
                               double eps_reg, const BoundaryData& g);

/// Row-wise w * (standard row) + (1 - w) * (monotone row).
SparseMatrix jacobian_hybrid(const GridFunction& u, const Residual& residual, const StencilBasisSet& bases,
                             const WeightField& weights, double eps_reg, const BoundaryData& g);

}  // namespace ma
