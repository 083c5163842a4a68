#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ma {

/// Physical coordinate in [0,1]^dim. Unused trailing components are zero.
using Point = std::array<double, 3>;
/// Lattice multi-index (i, j, k). Unused trailing components are zero.
using MultiIndex = std::array<int, 3>;
/// Closed-form real field on the unit box.
using Field = std::function<double(const Point&)>;

/// Uniform lattice on the unit box [0,1]^dim with n points per side,
/// boundary points included, spacing h = 1/(n-1).
///
/// Flat indices are row-major with x fastest:
///   flat = i + n * (j + n * k).
class GridSpec {
 public:
  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] double h() const noexcept { return h_; }

  /// Total number of lattice points, n^dim.
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  /// Number of interior points, (n-2)^dim.
  [[nodiscard]] std::size_t interior_size() const noexcept;

  [[nodiscard]] MultiIndex multi_index(std::size_t flat) const noexcept;
  [[nodiscard]] std::size_t flat_index(const MultiIndex& m) const noexcept;
  [[nodiscard]] bool contains(const MultiIndex& m) const noexcept;

  /// Coordinate of lattice index i along one axis; exact at 0, 1/2 (odd n) and 1.
  [[nodiscard]] double axis_coordinate(int i) const noexcept;
  [[nodiscard]] Point coordinate(std::size_t flat) const noexcept;
  [[nodiscard]] Point coordinate(const MultiIndex& m) const noexcept;

  /// Inverse of coordinate(): the lattice point at x, if x is (within 1e-9 h) a lattice point.
  [[nodiscard]] std::optional<std::size_t> index_of(const Point& x) const noexcept;

  [[nodiscard]] bool is_boundary(std::size_t flat) const noexcept;
  [[nodiscard]] bool is_boundary(const MultiIndex& m) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  GridSpec(int dim, int n);
  friend GridSpec make_grid(int dim, int n);

  int dim_ = 2;
  int n_ = 3;
  double h_ = 0.5;
  std::size_t size_ = 9;
};

/// Builds a grid; throws ConfigError unless dim is 2 or 3 and n >= 3.
GridSpec make_grid(int dim, int n);

/// Numbering of interior points (the unknowns of every discrete system),
/// in the same x-fastest order as the flat indices.
class InteriorIndex {
 public:
  explicit InteriorIndex(const GridSpec& grid);

  [[nodiscard]] std::size_t size() const noexcept { return flat_.size(); }
  [[nodiscard]] std::size_t flat(std::size_t ordinal) const noexcept { return flat_[ordinal]; }
  /// Interior ordinal of a flat index, or -1 for boundary points.
  [[nodiscard]] std::int64_t ordinal(std::size_t flat) const noexcept { return ordinal_[flat]; }
  [[nodiscard]] std::span<const std::size_t> flat_indices() const noexcept { return flat_; }

 private:
  std::vector<std::size_t> flat_;
  std::vector<std::int64_t> ordinal_;
};

/// One real value per lattice point.
class GridFunction {
 public:
  explicit GridFunction(const GridSpec& grid, double fill = 0.0);
  /// Throws DataError if values.size() != grid.size().
  GridFunction(const GridSpec& grid, std::vector<double> values);

  [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t flat) noexcept { return values_[flat]; }
  double operator[](std::size_t flat) const noexcept { return values_[flat]; }
  [[nodiscard]] double at(const MultiIndex& m) const noexcept { return values_[grid_.flat_index(m)]; }

  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  [[nodiscard]] bool all_finite() const noexcept;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

enum class PointClass : std::uint8_t { interior, boundary };

/// values[i] = field(coordinate(i)). Throws DataError naming the first
/// lattice point where the field is not finite.
GridFunction sample(const GridSpec& grid, const Field& field);

std::vector<PointClass> classify(const GridSpec& grid);

/// Multilinear interpolation of lattice values at an arbitrary point of the box.
double interpolate(const GridFunction& u, const Point& x);

/// Resamples u onto another grid of the same dimension by multilinear interpolation.
GridFunction resample(const GridFunction& u, const GridSpec& target);

/// CSV with header `x,y[,z],<value_name>`, one row per lattice point in flat order.
void write_csv(std::ostream& os, const GridFunction& u, std::string_view value_name = "value");

/// Reads the format produced by write_csv back onto `grid`; rows must be in flat order.
GridFunction read_csv(std::istream& is, const GridSpec& grid);

/// Dirichlet data on the boundary of the unit box.
///
/// Either a closed-form field (evaluated exactly, also at off-lattice
/// boundary points) or lattice samples, interpolated linearly along the
/// boundary faces.
class BoundaryData {
 public:
  static BoundaryData from_field(Field g);
  static BoundaryData from_samples(GridFunction samples);

  /// Value at a point on the boundary of the box.
  [[nodiscard]] double operator()(const Point& x) const;

  /// Value at a boundary point x interpolated linearly between the boundary
  /// lattice points of `grid` that surround it. Equals operator() at lattice points.
  [[nodiscard]] double on_lattice(const GridSpec& grid, const Point& x) const;

  /// Copies u and overwrites its boundary points with the data.
  [[nodiscard]] GridFunction apply(GridFunction u) const;

 private:
  BoundaryData() = default;

  Field field_;
  std::optional<GridFunction> samples_;
};

}  // namespace ma
