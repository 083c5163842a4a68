#pragma once

#include "ma/discretization.hpp"
#include "ma/solvers.hpp"
#include "support.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace ma::test {

struct FdCheck {
  double relative_error = 0.0;
  std::size_t rows_used = 0;
  std::size_t rows_excluded = 0;
};

/// Central differences (F[u + d v] - F[u - d v]) / 2d against J v, in the
/// 2-norm over rows whose monotone argmin and clamp pattern are the same at
/// u and u +- d v and have no clamped direction.
inline FdCheck jacobian_fd_check(const SchemeOperator& op, const GridFunction& u, std::uint64_t seed,
                                 double delta = 1e-6) {
  const GridSpec& grid = u.grid();
  const InteriorIndex interior(grid);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> v(interior.size());
  for (double& x : v) x = unit(rng);

  GridFunction up = u, um = u;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    up[interior.flat(i)] += delta * v[i];
    um[interior.flat(i)] -= delta * v[i];
  }
  const Residual r0 = op.residual(u);
  const Residual rp = op.residual(up);
  const Residual rm = op.residual(um);
  const std::vector<double> jv = op.jacobian(u, r0).multiply(v);

  const bool monotone_part = op.scheme() != Scheme::standard;
  FdCheck out;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    if (monotone_part && op.weights().w[interior.flat(i)] < 1.0) {
      const bool tie = r0.active_basis[i] != rp.active_basis[i] || r0.active_basis[i] != rm.active_basis[i];
      const bool clamp = r0.active_clamp[i] != 0 || rp.active_clamp[i] != r0.active_clamp[i] ||
                         rm.active_clamp[i] != r0.active_clamp[i];
      if (tie || clamp) {
        ++out.rows_excluded;
        continue;
      }
    }
    const double fd = (rp.values[i] - rm.values[i]) / (2.0 * delta);
    num += (fd - jv[i]) * (fd - jv[i]);
    den += jv[i] * jv[i];
    ++out.rows_used;
  }
  out.relative_error = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  return out;
}

/// Exact c2 solution plus lattice noise of amplitude 0.05 h^2, boundary untouched.
inline GridFunction perturbed_iterate(const Problem& problem, const GridSpec& grid, std::uint64_t seed) {
  GridFunction u = sample(grid, *problem.exact);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double amp = 0.05 * grid.h() * grid.h();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!grid.is_boundary(p)) u[p] += amp * unit(rng);
  }
  return u;
}

}  // namespace ma::test
