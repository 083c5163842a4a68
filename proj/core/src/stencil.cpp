#include "ma/stencil.hpp"

#include "ma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ma {

namespace {

bool canonical(const MultiIndex& v, int dim) {
  int g = 0;
  for (int a = 0; a < dim; ++a) g = std::gcd(g, std::abs(v[a]));
  if (g != 1) return false;
  for (int a = 0; a < dim; ++a) {
    if (v[a] != 0) return v[a] > 0;
  }
  return false;
}

// Walks from `center` along +sign*nu until the box boundary. Returns the arm.
Arm make_arm(const GridSpec& grid, const MultiIndex& c, const Direction& nu, int sign,
             const BoundaryData& g) {
  const int last = grid.n() - 1;
  double t_exit = std::numeric_limits<double>::infinity();
  int exit_axis = -1;
  for (int a = 0; a < grid.dim(); ++a) {
    const int step = sign * nu.v[a];
    if (step == 0) continue;
    const double room = step > 0 ? static_cast<double>(last - c[a]) : static_cast<double>(c[a]);
    const double t = room / std::abs(step);
    if (t < t_exit) {
      t_exit = t;
      exit_axis = a;
    }
  }

  const double unit = std::sqrt(nu.norm_squared()) * grid.h();
  Arm arm;
  if (t_exit >= 1.0) {
    MultiIndex m = c;
    for (int a = 0; a < grid.dim(); ++a) m[a] += sign * nu.v[a];
    arm.point = grid.flat_index(m);
    arm.length = unit;
    return arm;
  }

  Point x = grid.coordinate(c);
  for (int a = 0; a < grid.dim(); ++a) {
    x[a] += t_exit * sign * nu.v[a] * grid.h();
    x[a] = std::clamp(x[a], 0.0, 1.0);
  }
  x[exit_axis] = sign * nu.v[exit_axis] > 0 ? 1.0 : 0.0;
  arm.length = t_exit * unit;
  arm.full = false;
  if (auto p = grid.index_of(x)) {
    arm.point = *p;
  } else {
    arm.sample = g.on_lattice(grid, x);
  }
  return arm;
}

}  // namespace

std::vector<Direction> build_directions(int dim, int width, DirectionSet set) {
  if (dim != 2 && dim != 3) throw ConfigError("directions: dimension must be 2 or 3");
  if (width < 1) throw ConfigError("directions: stencil width must be >= 1");

  std::vector<Direction> out;
  const int zmax = dim == 3 ? width : 0;
  // Enumerate by increasing length so the axes come first.
  for (int z = -zmax; z <= zmax; ++z) {
    for (int y = -width; y <= width; ++y) {
      for (int x = -width; x <= width; ++x) {
        const MultiIndex v{x, y, z};
        if (!canonical(v, dim)) continue;
        const int nonzero = (x != 0) + (y != 0) + (z != 0);
        if (set == DirectionSet::planar && nonzero > 2) continue;
        out.push_back(Direction{v, dim});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Direction& a, const Direction& b) {
    if (a.norm_squared() != b.norm_squared()) return a.norm_squared() < b.norm_squared();
    return a.v > b.v;
  });
  return out;
}

StencilBasisSet build_orthogonal_bases(std::vector<Direction> directions, int dim) {
  StencilBasisSet set;
  set.dim = dim;
  set.directions = std::move(directions);
  for (const auto& d : set.directions) {
    set.width = std::max({set.width, std::abs(d.v[0]), std::abs(d.v[1]), std::abs(d.v[2])});
  }

  const int count = static_cast<int>(set.directions.size());
  const auto& dirs = set.directions;
  for (int a = 0; a < count; ++a) {
    for (int b = a + 1; b < count; ++b) {
      if (dirs[a].dot(dirs[b]) != 0) continue;
      if (dim == 2) {
        set.bases.push_back({a, b, -1});
        continue;
      }
      for (int c = b + 1; c < count; ++c) {
        if (dirs[a].dot(dirs[c]) == 0 && dirs[b].dot(dirs[c]) == 0) set.bases.push_back({a, b, c});
      }
    }
  }
  if (set.bases.empty()) throw ConfigError("stencil has no complete orthogonal basis");
  return set;
}

StencilBasisSet make_stencil(int dim, int width) {
  const auto set = dim == 3 ? DirectionSet::planar : DirectionSet::full;
  return build_orthogonal_bases(build_directions(dim, width, set), dim);
}

DirectionalStencil directional_stencil(const GridSpec& grid, std::size_t center, const Direction& nu,
                                       const BoundaryData& g) {
  const MultiIndex c = grid.multi_index(center);
  DirectionalStencil s;
  s.center = center;
  s.plus = make_arm(grid, c, nu, +1, g);
  s.minus = make_arm(grid, c, nu, -1, g);

  if (!s.shortened()) {
    const double inv = 1.0 / (nu.norm_squared() * grid.h() * grid.h());
    s.plus.weight = inv;
    s.minus.weight = inv;
    s.center_weight = -2.0 * inv;
    return s;
  }
  const double rp = s.plus.length;
  const double rm = s.minus.length;
  s.plus.weight = 2.0 / (rp * (rp + rm));
  s.minus.weight = 2.0 / (rm * (rp + rm));
  s.center_weight = -2.0 / (rp * rm);
  return s;
}

SecondDifference second_difference(const GridFunction& u, std::size_t center, const Direction& nu,
                                   const BoundaryData& g) {
  SecondDifference d;
  d.stencil = directional_stencil(u.grid(), center, nu, g);
  d.value = d.stencil.apply(u.values());
  return d;
}

}  // namespace ma
