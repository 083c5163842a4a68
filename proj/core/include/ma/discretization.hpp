#pragma once

#include "ma/grid.hpp"
#include "ma/matrix3.hpp"
#include "ma/problems.hpp"
#include "ma/stencil.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace ma {

/// Centred finite-difference Hessian at an interior point: pure second
/// differences over h^2, mixed differences over 4h^2.
SmallMatrix discrete_hessian(const GridFunction& u, std::size_t center);

/// Value of the standard scheme det(discrete Hessian) at an interior point.
double standard_value(const GridFunction& u, std::size_t center);

/// Value of the monotone scheme at one interior point.
struct MonotoneValue {
  double value = 0.0;
  int basis = 0;                       ///< argmin index into StencilBasisSet::bases (lowest on ties)
  std::uint32_t clamp = 0;             ///< bit k set when the difference along direction k is <= 0
  std::array<double, 3> differences{}; ///< second differences along the active basis directions
};

/// min over orthogonal bases of the product of positive parts of the
/// directional second differences.
MonotoneValue monotone_value(const GridFunction& u, std::size_t center, const StencilBasisSet& bases,
                             const BoundaryData& g);

/// Scheme value minus f at the interior points, indexed by interior ordinal.
struct Residual {
  std::vector<double> values;
  /// Monotone and hybrid only; indexed by interior ordinal.
  std::vector<int> active_basis;
  std::vector<std::uint32_t> active_clamp;

  [[nodiscard]] double max_norm() const noexcept;
  /// Scatters onto the full grid (boundary entries zero), e.g. for CSV export.
  [[nodiscard]] GridFunction to_grid_function(const GridSpec& grid) const;
};

/// Weight of the standard scheme in the hybrid combination.
struct WeightField {
  GridFunction w;
  std::vector<std::uint8_t> singular_mask;  ///< per lattice point: point belongs to the singular set
};

/// Builds w from the data. The singular set holds interior points with
/// f <= eps or f >= 1/eps, the (flat) boundary of the box, and any boundary
/// face flagged non-smooth. w is 0 within distance h of the set and rises
/// with a cubic smoothstep to 1 at distance (1 + ramp) h. Throws ConfigError
/// for eps <= 0 or ramp <= 0.
WeightField weight_field(const Problem& problem, const GridSpec& grid, double eps, double ramp = 2.0);
/// Same, from an already sampled right-hand side.
WeightField weight_field(const GridFunction& f, const std::vector<bool>& boundary_smooth, double eps,
                         double ramp = 2.0);
/// Constant weight, mainly for testing the endpoints of the hybrid scheme.
WeightField constant_weight(const GridSpec& grid, double w);

Residual residual_standard(const GridFunction& u, const GridFunction& f);
Residual residual_monotone(const GridFunction& u, const GridFunction& f, const StencilBasisSet& bases,
                           const BoundaryData& g);
Residual residual_hybrid(const GridFunction& u, const GridFunction& f, const StencilBasisSet& bases,
                         const WeightField& weights, const BoundaryData& g);

}  // namespace ma
