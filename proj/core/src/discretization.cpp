#include "ma/discretization.hpp"

#include "ma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ma {

SmallMatrix discrete_hessian(const GridFunction& u, std::size_t center) {
  const GridSpec& grid = u.grid();
  const int dim = grid.dim();
  const MultiIndex c = grid.multi_index(center);
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  const double u0 = u[center];

  auto at = [&](int a, int da, int b, int db) {
    MultiIndex m = c;
    m[a] += da;
    m[b] += db;
    return u.at(m);
  };

  SmallMatrix hess;
  hess.dim = dim;
  for (int a = 0; a < dim; ++a) {
    hess(a, a) = (at(a, 1, a, 0) + at(a, -1, a, 0) - 2.0 * u0) * inv_h2;
    for (int b = a + 1; b < dim; ++b) {
      const double mixed = at(a, 1, b, 1) + at(a, -1, b, -1) - at(a, -1, b, 1) - at(a, 1, b, -1);
      hess(a, b) = hess(b, a) = 0.25 * mixed * inv_h2;
    }
  }
  return hess;
}

double standard_value(const GridFunction& u, std::size_t center) {
  return discrete_hessian(u, center).determinant();
}

MonotoneValue monotone_value(const GridFunction& u, std::size_t center, const StencilBasisSet& bases,
                             const BoundaryData& g) {
  const std::size_t ndir = bases.directions.size();
  // Small fixed buffer; stencils used here have at most a few dozen directions.
  std::array<double, 64> diff{};
  if (ndir > diff.size()) throw ConfigError("monotone scheme supports at most 64 directions");

  MonotoneValue out;
  for (std::size_t k = 0; k < ndir; ++k) {
    diff[k] = second_difference(u, center, bases.directions[k], g).value;
    if (diff[k] <= 0.0 && k < 32) out.clamp |= (1u << k);
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < bases.bases.size(); ++b) {
    double prod = 1.0;
    for (int j = 0; j < bases.dim; ++j) prod *= std::max(diff[bases.bases[b][j]], 0.0);
    if (prod < best) {
      best = prod;
      out.basis = static_cast<int>(b);
    }
  }
  out.value = best;
  for (int j = 0; j < bases.dim; ++j) out.differences[j] = diff[bases.bases[out.basis][j]];
  return out;
}

double Residual::max_norm() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

GridFunction Residual::to_grid_function(const GridSpec& grid) const {
  InteriorIndex interior(grid);
  GridFunction out(grid);
  for (std::size_t i = 0; i < interior.size() && i < values.size(); ++i) out[interior.flat(i)] = values[i];
  return out;
}

WeightField weight_field(const GridFunction& f, [[maybe_unused]] const std::vector<bool>& boundary_smooth, double eps,
                         double ramp) {
  if (!(eps > 0.0)) throw ConfigError("weight field: eps must be positive");
  if (!(ramp > 0.0)) throw ConfigError("weight field: ramp must be positive");
  const GridSpec& grid = f.grid();
  const int dim = grid.dim();
  const int last = grid.n() - 1;

  WeightField out{GridFunction(grid, 1.0), std::vector<std::uint8_t>(grid.size(), 0)};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const MultiIndex m = grid.multi_index(p);
    if (grid.is_boundary(m)) {
      // Every face of the box is flat, so the whole boundary is singular
      // whatever the smoothness flags of g say.
      out.singular_mask[p] = 1;
    } else {
      out.singular_mask[p] = f[p] <= eps || f[p] >= 1.0 / eps;
    }
  }

  const double h = grid.h();
  const int reach = static_cast<int>(std::ceil(1.0 + ramp)) + 1;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const MultiIndex c = grid.multi_index(p);
    double best2 = std::numeric_limits<double>::infinity();
    MultiIndex lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      lo[a] = std::max(c[a] - reach, 0);
      hi[a] = std::min(c[a] + reach, last);
    }
    for (int k = lo[2]; k <= hi[2]; ++k) {
      for (int j = lo[1]; j <= hi[1]; ++j) {
        for (int i = lo[0]; i <= hi[0]; ++i) {
          const MultiIndex m{i, j, k};
          if (!out.singular_mask[grid.flat_index(m)]) continue;
          const double d2 = double(i - c[0]) * (i - c[0]) + double(j - c[1]) * (j - c[1]) +
                            double(k - c[2]) * (k - c[2]);
          best2 = std::min(best2, d2);
        }
      }
    }
    const double distance = std::sqrt(best2) * h;
    const double t = std::clamp((distance - h) / (ramp * h), 0.0, 1.0);
    out.w[p] = t * t * (3.0 - 2.0 * t);
  }
  return out;
}

WeightField weight_field(const Problem& problem, const GridSpec& grid, double eps, double ramp) {
  return weight_field(problem.rhs(grid), problem.boundary_smooth, eps, ramp);
}

WeightField constant_weight(const GridSpec& grid, double w) {
  return WeightField{GridFunction(grid, w), std::vector<std::uint8_t>(grid.size(), 0)};
}

Residual residual_standard(const GridFunction& u, const GridFunction& f) {
  const InteriorIndex interior(u.grid());
  Residual r;
  r.values.resize(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const std::size_t p = interior.flat(i);
    r.values[i] = standard_value(u, p) - f[p];
  }
  return r;
}

Residual residual_monotone(const GridFunction& u, const GridFunction& f, const StencilBasisSet& bases,
                           const BoundaryData& g) {
  const InteriorIndex interior(u.grid());
  Residual r;
  r.values.resize(interior.size());
  r.active_basis.resize(interior.size());
  r.active_clamp.resize(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const std::size_t p = interior.flat(i);
    const MonotoneValue m = monotone_value(u, p, bases, g);
    r.values[i] = m.value - f[p];
    r.active_basis[i] = m.basis;
    r.active_clamp[i] = m.clamp;
  }
  return r;
}

Residual residual_hybrid(const GridFunction& u, const GridFunction& f, const StencilBasisSet& bases,
                         const WeightField& weights, const BoundaryData& g) {
  const InteriorIndex interior(u.grid());
  Residual r;
  r.values.resize(interior.size());
  r.active_basis.resize(interior.size());
  r.active_clamp.resize(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const std::size_t p = interior.flat(i);
    const double w = weights.w[p];
    const MonotoneValue m = monotone_value(u, p, bases, g);
    const double standard = w > 0.0 ? standard_value(u, p) : 0.0;
    r.values[i] = w * standard + (1.0 - w) * m.value - f[p];
    r.active_basis[i] = m.basis;
    r.active_clamp[i] = m.clamp;
  }
  return r;
}

}  // namespace ma
