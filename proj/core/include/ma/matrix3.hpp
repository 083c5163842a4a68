#pragma once

#include <array>

namespace ma {

/// Small dense matrix of dimension 2 or 3 stored in a 3x3 array.
struct SmallMatrix {
  int dim = 2;
  std::array<std::array<double, 3>, 3> a{};

  double& operator()(int r, int c) noexcept { return a[r][c]; }
  double operator()(int r, int c) const noexcept { return a[r][c]; }

  [[nodiscard]] double determinant() const noexcept {
    if (dim == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }

  /// Transpose of the cofactor matrix; d det(A)[B] = trace(adj(A) B).
  [[nodiscard]] SmallMatrix adjugate() const noexcept {
    SmallMatrix r;
    r.dim = dim;
    if (dim == 2) {
      r.a[0][0] = a[1][1];
      r.a[1][1] = a[0][0];
      r.a[0][1] = -a[0][1];
      r.a[1][0] = -a[1][0];
      return r;
    }
    r.a[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    r.a[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
    r.a[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
    r.a[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
    r.a[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
    r.a[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
    r.a[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
    r.a[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
    r.a[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return r;
  }
};

}  // namespace ma
