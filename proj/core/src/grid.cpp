#include "ma/grid.hpp"

#include "ma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ma {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::string format_point(const Point& x, int dim) {
  std::ostringstream os;
  os << '(';
  for (int a = 0; a < dim; ++a) os << (a ? ", " : "") << x[a];
  os << ')';
  return os.str();
}

}  // namespace

GridSpec::GridSpec(int dim, int n)
    : dim_(dim), n_(n), h_(1.0 / (n - 1)), size_(ipow(static_cast<std::size_t>(n), dim)) {}

GridSpec make_grid(int dim, int n) {
  if (dim != 2 && dim != 3) {
    throw ConfigError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (n < 3) {
    throw ConfigError("grid needs at least 3 points per side, got " + std::to_string(n));
  }
  return GridSpec(dim, n);
}

std::size_t GridSpec::interior_size() const noexcept {
  return ipow(static_cast<std::size_t>(n_ - 2), dim_);
}

MultiIndex GridSpec::multi_index(std::size_t flat) const noexcept {
  MultiIndex m{0, 0, 0};
  const auto n = static_cast<std::size_t>(n_);
  for (int a = 0; a < dim_; ++a) {
    m[a] = static_cast<int>(flat % n);
    flat /= n;
  }
  return m;
}

std::size_t GridSpec::flat_index(const MultiIndex& m) const noexcept {
  const auto n = static_cast<std::size_t>(n_);
  std::size_t flat = 0;
  for (int a = dim_ - 1; a >= 0; --a) flat = flat * n + static_cast<std::size_t>(m[a]);
  return flat;
}

bool GridSpec::contains(const MultiIndex& m) const noexcept {
  for (int a = 0; a < dim_; ++a) {
    if (m[a] < 0 || m[a] >= n_) return false;
  }
  return true;
}

double GridSpec::axis_coordinate(int i) const noexcept {
  return static_cast<double>(i) / static_cast<double>(n_ - 1);
}

Point GridSpec::coordinate(const MultiIndex& m) const noexcept {
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = axis_coordinate(m[a]);
  return x;
}

Point GridSpec::coordinate(std::size_t flat) const noexcept { return coordinate(multi_index(flat)); }

std::optional<std::size_t> GridSpec::index_of(const Point& x) const noexcept {
  MultiIndex m{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double t = x[a] * (n_ - 1);
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9 || r < 0 || r > n_ - 1) return std::nullopt;
    m[a] = static_cast<int>(r);
  }
  return flat_index(m);
}

bool GridSpec::is_boundary(const MultiIndex& m) const noexcept {
  for (int a = 0; a < dim_; ++a) {
    if (m[a] == 0 || m[a] == n_ - 1) return true;
  }
  return false;
}

bool GridSpec::is_boundary(std::size_t flat) const noexcept { return is_boundary(multi_index(flat)); }

InteriorIndex::InteriorIndex(const GridSpec& grid) : ordinal_(grid.size(), -1) {
  flat_.reserve(grid.interior_size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!grid.is_boundary(p)) {
      ordinal_[p] = static_cast<std::int64_t>(flat_.size());
      flat_.push_back(p);
    }
  }
}

GridFunction::GridFunction(const GridSpec& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

GridFunction::GridFunction(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DataError("grid function has " + std::to_string(values_.size()) + " values, grid has " +
                    std::to_string(grid_.size()) + " points");
  }
}

bool GridFunction::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GridFunction sample(const GridSpec& grid, const Field& field) {
  GridFunction u(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Point x = grid.coordinate(p);
    const double v = field(x);
    if (!std::isfinite(v)) {
      throw DataError("field is not finite at lattice point " + std::to_string(p) + " " +
                      format_point(x, grid.dim()));
    }
    u[p] = v;
  }
  return u;
}

std::vector<PointClass> classify(const GridSpec& grid) {
  std::vector<PointClass> tags(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    tags[p] = grid.is_boundary(p) ? PointClass::boundary : PointClass::interior;
  }
  return tags;
}

namespace {

template <class Lookup>
double multilinear(const GridSpec& grid, const Point& x, Lookup&& value_at) {
  const int dim = grid.dim();
  const int last = grid.n() - 1;

  MultiIndex base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    const double t = std::clamp(x[a], 0.0, 1.0) * last;
    int i = static_cast<int>(std::floor(t));
    i = std::clamp(i, 0, last - 1);
    double s = t - i;
    if (s < 1e-12) s = 0.0;
    if (s > 1.0 - 1e-12) {
      s = 0.0;
      i += 1;
    }
    base[a] = i;
    frac[a] = s;
  }

  double value = 0.0;
  for (int corner = 0; corner < (1 << dim); ++corner) {
    double weight = 1.0;
    MultiIndex m = base;
    for (int a = 0; a < dim; ++a) {
      const bool upper = (corner >> a) & 1;
      weight *= upper ? frac[a] : 1.0 - frac[a];
      m[a] += upper ? 1 : 0;
    }
    if (weight != 0.0) value += weight * value_at(m);
  }
  return value;
}

}  // namespace

double interpolate(const GridFunction& u, const Point& x) {
  return multilinear(u.grid(), x, [&](const MultiIndex& m) { return u.at(m); });
}

GridFunction resample(const GridFunction& u, const GridSpec& target) {
  if (target.dim() != u.grid().dim()) throw ConfigError("resample: dimension mismatch");
  GridFunction out(target);
  for (std::size_t p = 0; p < target.size(); ++p) out[p] = interpolate(u, target.coordinate(p));
  return out;
}

void write_csv(std::ostream& os, const GridFunction& u, std::string_view value_name) {
  static constexpr const char* axes[] = {"x", "y", "z"};
  const GridSpec& grid = u.grid();
  for (int a = 0; a < grid.dim(); ++a) os << axes[a] << ',';
  os << value_name << '\n';
  char buf[32];
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Point x = grid.coordinate(p);
    for (int a = 0; a < grid.dim(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", x[a]);
      os << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", u[p]);
    os << buf << '\n';
  }
}

GridFunction read_csv(std::istream& is, const GridSpec& grid) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("grid CSV: missing header");
  std::vector<double> values;
  values.reserve(grid.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw DataError("grid CSV: malformed row '" + line + "'");
    values.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
  }
  return GridFunction(grid, std::move(values));
}

BoundaryData BoundaryData::from_field(Field g) {
  BoundaryData data;
  data.field_ = std::move(g);
  return data;
}

BoundaryData BoundaryData::from_samples(GridFunction samples) {
  BoundaryData data;
  data.samples_.emplace(std::move(samples));
  return data;
}

double BoundaryData::operator()(const Point& x) const {
  if (field_) return field_(x);
  return interpolate(*samples_, x);
}

double BoundaryData::on_lattice(const GridSpec& grid, const Point& x) const {
  if (samples_ && samples_->grid() == grid) return interpolate(*samples_, x);
  return multilinear(grid, x, [&](const MultiIndex& m) { return (*this)(grid.coordinate(m)); });
}

GridFunction BoundaryData::apply(GridFunction u) const {
  const GridSpec& grid = u.grid();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (grid.is_boundary(p)) u[p] = (*this)(grid.coordinate(p));
  }
  return u;
}

}  // namespace ma
