#pragma once

#include "ma/grid.hpp"
#include "ma/stencil.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ma::test {

inline double dot3(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    if (a[piv][k] == 0.0) throw std::runtime_error("dense_solve: singular");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

/// Lower convex hull of (x_i, y_i) with increasing x, evaluated back at every x_i.
inline std::vector<double> lower_hull_values(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> out(x.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (seg + 2 < hull.size() && x[hull[seg + 1]] < x[i]) ++seg;
    const std::size_t a = hull[seg];
    const std::size_t b = hull[std::min(seg + 1, hull.size() - 1)];
    const double t = b == a ? 0.0 : (x[i] - x[a]) / (x[b] - x[a]);
    out[i] = (1.0 - t) * y[a] + t * y[b];
  }
  return out;
}

/// Random symmetric positive definite matrix R diag(l) R^T with eigenvalues in [lo, hi].
inline std::array<std::array<double, 3>, 3> random_spd(int dim, std::mt19937_64& rng, double lo = 0.3,
                                                       double hi = 3.0) {
  std::uniform_real_distribution<double> eig(lo, hi);
  std::normal_distribution<double> normal;
  std::array<std::array<double, 3>, 3> q{};
  // Gram-Schmidt on random vectors.
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) q[i][k] = normal(rng);
    for (int j = 0; j < i; ++j) {
      double d = 0.0;
      for (int k = 0; k < dim; ++k) d += q[i][k] * q[j][k];
      for (int k = 0; k < dim; ++k) q[i][k] -= d * q[j][k];
    }
    double nrm = 0.0;
    for (int k = 0; k < dim; ++k) nrm += q[i][k] * q[i][k];
    nrm = std::sqrt(nrm);
    for (int k = 0; k < dim; ++k) q[i][k] /= nrm;
  }
  std::array<double, 3> l{};
  for (int i = 0; i < dim; ++i) l[i] = eig(rng);
  std::array<std::array<double, 3>, 3> a{};
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      for (int i = 0; i < dim; ++i) a[r][c] += l[i] * q[i][r] * q[i][c];
    }
  }
  return a;
}

inline double det(const std::array<std::array<double, 3>, 3>& a, int dim) {
  if (dim == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

inline Field quadratic(const std::array<std::array<double, 3>, 3>& a, int dim, Point shift = {0.5, 0.5, 0.5}) {
  return [a, dim, shift](const Point& x) {
    double s = 0.0;
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) s += 0.5 * a[r][c] * (x[r] - shift[r]) * (x[c] - shift[c]);
    }
    return s;
  };
}

/// Interior points whose full stencil along every direction stays on the lattice.
inline std::vector<std::size_t> deep_points(const GridSpec& grid, int width) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const MultiIndex m = grid.multi_index(p);
    bool ok = true;
    for (int a = 0; a < grid.dim(); ++a) ok = ok && m[a] >= width && m[a] <= grid.n() - 1 - width;
    if (ok) out.push_back(p);
  }
  return out;
}

/// Smallest axis second difference (scaled by 1/h^2) over interior points.
inline double min_axis_difference(const GridFunction& u) {
  const GridSpec& grid = u.grid();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  double m = 1e300;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (grid.is_boundary(p)) continue;
    const MultiIndex c = grid.multi_index(p);
    for (int a = 0; a < grid.dim(); ++a) {
      MultiIndex lo = c, hi = c;
      --lo[a];
      ++hi[a];
      m = std::min(m, (u.at(lo) - 2.0 * u[p] + u.at(hi)) * inv_h2);
    }
  }
  return m;
}

}  // namespace ma::test
