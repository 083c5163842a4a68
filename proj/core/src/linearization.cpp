#include "ma/linearization.hpp"

#include "ma/errors.hpp"

#include <algorithm>

namespace ma {

namespace {

void add_point(RowAssembler& row, const InteriorIndex& interior, std::size_t flat, double weight) {
  const auto ordinal = interior.ordinal(flat);
  if (ordinal >= 0 && weight != 0.0) row.add(static_cast<std::size_t>(ordinal), weight);
}

void add_standard_row(RowAssembler& row, const GridFunction& u, const InteriorIndex& interior,
                      std::size_t center, double scale) {
  const GridSpec& grid = u.grid();
  const int dim = grid.dim();
  const MultiIndex c = grid.multi_index(center);
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  const SmallMatrix adj = discrete_hessian(u, center).adjugate();

  auto neighbor = [&](int a, int da, int b, int db) {
    MultiIndex m = c;
    m[a] += da;
    m[b] += db;
    return grid.flat_index(m);
  };

  for (int a = 0; a < dim; ++a) {
    const double coef = scale * adj(a, a) * inv_h2;
    add_point(row, interior, neighbor(a, 1, a, 0), coef);
    add_point(row, interior, neighbor(a, -1, a, 0), coef);
    add_point(row, interior, center, -2.0 * coef);
    for (int b = a + 1; b < dim; ++b) {
      // H_ab and H_ba share one stencil.
      const double mixed = scale * (adj(a, b) + adj(b, a)) * 0.25 * inv_h2;
      add_point(row, interior, neighbor(a, 1, b, 1), mixed);
      add_point(row, interior, neighbor(a, -1, b, -1), mixed);
      add_point(row, interior, neighbor(a, -1, b, 1), -mixed);
      add_point(row, interior, neighbor(a, 1, b, -1), -mixed);
    }
  }
}

void add_monotone_row(RowAssembler& row, const GridFunction& u, const InteriorIndex& interior,
                      std::size_t center, int basis, const StencilBasisSet& bases, double eps_reg,
                      const BoundaryData& g, double scale) {
  const int dim = bases.dim;
  std::array<DirectionalStencil, 3> stencils;
  std::array<double, 3> regularized{1.0, 1.0, 1.0};
  for (int j = 0; j < dim; ++j) {
    const Direction& nu = bases.directions[bases.bases[basis][j]];
    stencils[j] = directional_stencil(u.grid(), center, nu, g);
    regularized[j] = std::max(stencils[j].apply(u.values()), eps_reg);
  }
  for (int j = 0; j < dim; ++j) {
    double coef = scale;
    for (int k = 0; k < dim; ++k) {
      if (k != j) coef *= regularized[k];
    }
    const DirectionalStencil& s = stencils[j];
    add_point(row, interior, center, coef * s.center_weight);
    if (s.plus.point) add_point(row, interior, *s.plus.point, coef * s.plus.weight);
    if (s.minus.point) add_point(row, interior, *s.minus.point, coef * s.minus.weight);
  }
}

void check_residual(const Residual& residual, std::size_t unknowns) {
  if (residual.active_basis.size() != unknowns) {
    throw ConfigError("monotone Jacobian needs the active bases of a monotone or hybrid residual");
  }
}

}  // namespace

double default_regularization(const GridSpec& grid) { return 1e-8 / (2.0 * grid.h() * grid.h()); }

SparseMatrix jacobian_standard(const GridFunction& u) {
  const InteriorIndex interior(u.grid());
  RowAssembler row(interior.size(), interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    add_standard_row(row, u, interior, interior.flat(i), 1.0);
    row.finish_row();
  }
  return std::move(row).build();
}

SparseMatrix jacobian_monotone(const GridFunction& u, const Residual& residual, const StencilBasisSet& bases,
                               double eps_reg, const BoundaryData& g) {
  const InteriorIndex interior(u.grid());
  check_residual(residual, interior.size());
  RowAssembler row(interior.size(), interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    add_monotone_row(row, u, interior, interior.flat(i), residual.active_basis[i], bases, eps_reg, g, 1.0);
    row.finish_row();
  }
  return std::move(row).build();
}

SparseMatrix jacobian_hybrid(const GridFunction& u, const Residual& residual, const StencilBasisSet& bases,
                             const WeightField& weights, double eps_reg, const BoundaryData& g) {
  const InteriorIndex interior(u.grid());
  check_residual(residual, interior.size());
  RowAssembler row(interior.size(), interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const std::size_t p = interior.flat(i);
    const double w = weights.w[p];
    if (w > 0.0) add_standard_row(row, u, interior, p, w);
    if (w < 1.0) add_monotone_row(row, u, interior, p, residual.active_basis[i], bases, eps_reg, g, 1.0 - w);
    row.finish_row();
  }
  return std::move(row).build();
}

}  // namespace ma
