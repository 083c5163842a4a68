#include "ma/problems.hpp"

#include "ma/errors.hpp"
#include "ma/matrix3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace ma {

namespace {

double norm2(const Point& x, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += x[a] * x[a];
  return s;
}

double dist(const Point& x, const Point& c, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
  return std::sqrt(s);
}

Problem smooth_radial(int dim) {
  Problem p;
  p.dim = dim;
  p.name = dim == 2 ? "c2_2d" : "c2_3d";
  p.description = "smooth radial solution exp(|x|^2/2)";
  auto u = [dim](const Point& x) { return std::exp(0.5 * norm2(x, dim)); };
  p.g = u;
  p.exact = u;
  p.f = [dim](const Point& x) {
    const double r2 = norm2(x, dim);
    return (1.0 + r2) * std::exp(0.5 * dim * r2);
  };
  return p;
}

Problem c1_ring(int dim) {
  Problem p;
  p.dim = dim;
  p.name = dim == 2 ? "c1_2d" : "c1_3d";
  p.description = "C^1 solution, flat inside the ball of radius 0.2 about the centre";
  const Point c = p.center;
  auto u = [dim, c](const Point& x) {
    const double s = std::max(dist(x, c, dim) - 0.2, 0.0);
    return 0.5 * s * s;
  };
  p.g = u;
  p.exact = u;
  p.f = [dim, c](const Point& x) {
    const double r = dist(x, c, dim);
    if (r <= 0.2) return 0.0;
    // Radial second derivative 1, tangential (r - 0.2)/r, each with multiplicity dim-1.
    const double t = 1.0 - 0.2 / r;
    return dim == 2 ? t : t * t;
  };
  p.kink_radii = {0.2};
  return p;
}

Problem blowup(int dim) {
  Problem p;
  p.dim = dim;
  p.name = dim == 2 ? "blowup_2d" : "blowup_3d";
  p.description = "sphere cap -sqrt(d - |x|^2), gradient unbounded at the far corner";
  const double d = dim;
  auto u = [dim, d](const Point& x) { return -std::sqrt(std::max(d - norm2(x, dim), 0.0)); };
  p.g = u;
  p.exact = u;
  p.f = [dim, d](const Point& x) {
    const double s = d - norm2(x, dim);
    return d * std::pow(s, -0.5 * (dim + 2));
  };
  return p;
}

Problem cone() {
  Problem p;
  p.dim = 2;
  p.name = "cone_2d";
  p.description = "cone |x - x0| with f = pi * delta(x0)";
  const Point c = p.center;
  auto u = [c](const Point& x) { return dist(x, c, 2); };
  p.g = u;
  p.exact = u;
  p.rhs_on_grid = [c](const GridSpec& grid) {
    return dirac_approximation(grid, c, std::numbers::pi).density;
  };
  p.kink_radii = {0.0};
  return p;
}

}  // namespace

GridFunction Problem::rhs(const GridSpec& grid) const {
  if (grid.dim() != dim) throw ConfigError("problem " + name + " is " + std::to_string(dim) + "D");
  if (rhs_on_grid) return rhs_on_grid(grid);
  GridFunction out(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (grid.is_boundary(p)) continue;
    const double v = f(grid.coordinate(p));
    if (!std::isfinite(v)) {
      throw DataError("right-hand side of " + name + " is not finite at lattice point " + std::to_string(p));
    }
    out[p] = v;
  }
  return out;
}

std::vector<std::string> problem_names() {
  return {"c2_2d", "c1_2d", "blowup_2d", "cone_2d", "c2_3d", "c1_3d", "blowup_3d"};
}

Problem get_problem(const std::string& name) {
  Problem p;
  if (name == "c2_2d") p = smooth_radial(2);
  else if (name == "c1_2d") p = c1_ring(2);
  else if (name == "blowup_2d") p = blowup(2);
  else if (name == "cone_2d") p = cone();
  else if (name == "c2_3d") p = smooth_radial(3);
  else if (name == "c1_3d") p = c1_ring(3);
  else if (name == "blowup_3d") p = blowup(3);
  else throw ConfigError("unknown problem '" + name + "'");
  p.boundary_smooth.assign(2 * p.dim, true);
  return p;
}

Problem get_problem(const std::string& name, const GridSpec& grid) {
  Problem p = get_problem(name);
  if (p.dim != grid.dim()) {
    throw ConfigError("problem " + name + " is " + std::to_string(p.dim) + "D but the grid is " +
                      std::to_string(grid.dim()) + "D");
  }
  return p;
}

DiracApproximation dirac_approximation(const GridSpec& grid, const Point& x0, double mass) {
  const double radius = 0.5 * grid.h();
  const double density = mass / (std::numbers::pi * radius * radius);
  DiracApproximation out{GridFunction(grid), 0};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (dist(grid.coordinate(p), x0, grid.dim()) <= radius * (1.0 + 1e-12)) {
      out.density[p] = density;
      ++out.support_size;
    }
  }
  return out;
}

ConsistencyReport verify_consistency(const Problem& problem, int samples, std::uint64_t seed, double tol) {
  if (!problem.exact) throw ConfigError("problem " + problem.name + " has no exact solution");
  const Field& u = *problem.exact;
  const int dim = problem.dim;
  constexpr double step = 1e-3;
  constexpr double kink_margin = 0.02;

  auto shifted = [&](Point x, int a, double da, int b, double db) {
    x[a] += da;
    x[b] += db;
    return u(x);
  };
  // Fourth-order central differences.
  auto hessian = [&](const Point& x) {
    SmallMatrix hess;
    hess.dim = dim;
    const double u0 = u(x);
    for (int a = 0; a < dim; ++a) {
      const double p1 = shifted(x, a, step, a, 0.0), m1 = shifted(x, a, -step, a, 0.0);
      const double p2 = shifted(x, a, 2 * step, a, 0.0), m2 = shifted(x, a, -2 * step, a, 0.0);
      hess(a, a) = (-p2 + 16 * p1 - 30 * u0 + 16 * m1 - m2) / (12 * step * step);
      for (int b = a + 1; b < dim; ++b) {
        auto mixed = [&](double s) {
          return (shifted(x, a, s, b, s) - shifted(x, a, s, b, -s) - shifted(x, a, -s, b, s) +
                  shifted(x, a, -s, b, -s)) /
                 (4 * s * s);
        };
        hess(a, b) = hess(b, a) = (4 * mixed(step) - mixed(2 * step)) / 3;
      }
    }
    return hess;
  };

  ConsistencyReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.05, 0.95);
  int attempts = 0;
  while (static_cast<int>(report.checked) < samples && attempts < 100 * samples) {
    ++attempts;
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = coord(rng);
    const double r = dist(x, problem.center, dim);
    const bool near_kink = std::any_of(problem.kink_radii.begin(), problem.kink_radii.end(),
                                       [&](double k) { return std::abs(r - k) < kink_margin; });
    if (near_kink) continue;

    // A measure-valued f has zero density away from its support.
    const double f = problem.f ? problem.f(x) : 0.0;
    const double det = hessian(x).determinant();
    const double err = std::abs(det - f) / std::max(1.0, std::abs(f));
    ++report.checked;
    if (err > report.max_relative_error) {
      report.max_relative_error = err;
      report.worst_point = x;
    }
  }

  report.passed = report.max_relative_error <= tol;
  std::ostringstream msg;
  msg << problem.name << ": " << report.checked << " points, max relative error "
      << report.max_relative_error << " at (";
  for (int a = 0; a < dim; ++a) msg << (a ? ", " : "") << report.worst_point[a];
  msg << ")" << (report.passed ? "" : " exceeds tolerance");
  report.message = msg.str();
  return report;
}

}  // namespace ma
