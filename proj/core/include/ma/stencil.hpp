#pragma once

#include "ma/grid.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ma {

/// Integer lattice direction, gcd-reduced, first nonzero component positive.
struct Direction {
  MultiIndex v{0, 0, 0};
  int dim = 2;

  [[nodiscard]] int dot(const Direction& o) const noexcept {
    return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2];
  }
  [[nodiscard]] double norm_squared() const noexcept { return static_cast<double>(dot(*this)); }

  friend bool operator==(const Direction&, const Direction&) = default;
};

/// Which directions of a given Chebyshev width enter the stencil.
enum class DirectionSet {
  full,    ///< every reduced direction with max |component| <= width
  planar,  ///< only directions with at most two nonzero components (3D: no body diagonals)
};

/// Canonical directions of Chebyshev norm <= width. (2,2) gives the
/// 17-point stencil; (3,1,planar) gives the 19-point stencil.
std::vector<Direction> build_directions(int dim, int width, DirectionSet set = DirectionSet::full);

/// Directions plus every unordered d-tuple of mutually orthogonal directions.
struct StencilBasisSet {
  int dim = 2;
  int width = 1;
  std::vector<Direction> directions;
  /// Indices into `directions`; entries past dim are unused.
  std::vector<std::array<int, 3>> bases;

  /// Number of lattice points touched at an interior point: 1 + 2 * directions.
  [[nodiscard]] std::size_t stencil_points() const noexcept { return 1 + 2 * directions.size(); }
};

/// Throws ConfigError if no complete orthogonal basis exists.
StencilBasisSet build_orthogonal_bases(std::vector<Direction> directions, int dim);

/// Stencil used by the monotone scheme: `full` directions in 2D, `planar` in 3D.
StencilBasisSet make_stencil(int dim, int width);

/// One arm (x + t nu h, t > 0 or t < 0) of a directional second difference.
struct Arm {
  double weight = 0.0;                ///< >= 0
  double length = 0.0;                ///< physical distance from the centre
  std::optional<std::size_t> point;   ///< lattice point, or empty for a boundary sample
  double sample = 0.0;                ///< boundary value when `point` is empty
  bool full = true;                   ///< false when cut short by the boundary
};

/// Three-point second difference along a direction at an interior point.
/// Full arms use the centred formula divided by |nu|^2 h^2; arms that would
/// leave the box are shortened to the boundary and use the nonuniform formula,
/// with g there interpolated linearly between boundary lattice points.
struct DirectionalStencil {
  std::size_t center = 0;
  double center_weight = 0.0;  ///< < 0
  Arm plus;
  Arm minus;

  [[nodiscard]] bool shortened() const noexcept { return !plus.full || !minus.full; }
  [[nodiscard]] double apply(std::span<const double> u) const noexcept {
    const double up = plus.point ? u[*plus.point] : plus.sample;
    const double um = minus.point ? u[*minus.point] : minus.sample;
    return plus.weight * up + minus.weight * um + center_weight * u[center];
  }
};

DirectionalStencil directional_stencil(const GridSpec& grid, std::size_t center, const Direction& nu,
                                       const BoundaryData& g);

struct SecondDifference {
  double value = 0.0;
  DirectionalStencil stencil;
};

/// Approximates the second derivative of u along nu at interior point `center`.
SecondDifference second_difference(const GridFunction& u, std::size_t center, const Direction& nu,
                                   const BoundaryData& g);

}  // namespace ma
