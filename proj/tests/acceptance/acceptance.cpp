// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 unless
// --strict is given and some criterion fails.

#include "checks.hpp"
#include "ma/reporting.hpp"
#include "ma/solvers.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ma::GridFunction;
using ma::make_grid;
using ma::Point;
using ma::SolverConfig;

constexpr double kErrorFactor = 2.0;
constexpr double kIterationBand = 0.5;
constexpr double kJacobianTol = 1e-5;
constexpr double kFdDelta = 1e-6;
constexpr int kEllipticityTrials = 1000;
constexpr int kQuadraticMatrices = 100;
constexpr double kQuadraticEqualityTol = 1e-12;
constexpr double kScalingExponent = 1.8;
constexpr double k3dSeconds = 60.0;

struct Run {
  double error = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  bool converged = false;
  std::string termination;
};

std::map<std::string, Run> g_runs;

Run run_newton(const std::string& name, int n) {
  const std::string key = name + "@" + std::to_string(n);
  if (auto it = g_runs.find(key); it != g_runs.end()) return it->second;
  const auto problem = ma::get_problem(name);
  const auto result = ma::newton_solve(problem, make_grid(problem.dim, n), SolverConfig{});
  Run r{ma::max_error(result.u, *problem.exact), result.report.iterations, result.report.seconds,
        result.report.converged(), std::string(ma::to_string(result.report.termination))};
  g_runs[key] = r;
  return r;
}

int g_failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, title.c_str());
  std::printf("    %s\n", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool within_factor(double value, double target, double factor) {
  return value >= target / factor && value <= target * factor;
}

void criterion_1() {
  struct Target {
    const char* name;
    int n;
    double error;
  };
  const Target targets[] = {{"c2_2d", 31, 24.45e-5}, {"c2_2d", 63, 9.06e-5},  {"c1_2d", 31, 12.2e-4},
                            {"c1_2d", 63, 4.2e-4},   {"blowup_2d", 31, 1.74e-3}, {"blowup_2d", 63, 0.59e-3},
                            {"cone_2d", 31, 3e-3},   {"cone_2d", 63, 3e-3}};
  bool pass = true;
  std::ostringstream os;
  for (const auto& t : targets) {
    const Run r = run_newton(t.name, t.n);
    const bool ok = r.converged && within_factor(r.error, t.error, kErrorFactor);
    pass = pass && ok;
    os << t.name << "/" << t.n << " " << fmt("%.3e", r.error) << " vs " << fmt("%.3e", t.error) << (ok ? "" : " [out]")
       << "; ";
  }
  report(1, pass, "2D error table, hybrid Newton, factor 2", os.str());
}

void criterion_2() {
  struct Target {
    const char* name;
    int n;
    int iterations;
  };
  const Target targets[] = {{"c2_2d", 31, 3},     {"c2_2d", 63, 4},     {"c1_2d", 31, 4},    {"c1_2d", 63, 7},
                            {"blowup_2d", 31, 4}, {"blowup_2d", 63, 4}, {"cone_2d", 31, 9}, {"cone_2d", 63, 15}};
  bool pass = true;
  std::ostringstream os;
  for (const auto& t : targets) {
    const Run r = run_newton(t.name, t.n);
    const bool ok = r.converged && std::abs(r.iterations - t.iterations) <= kIterationBand * t.iterations &&
                    r.iterations <= 2 * t.iterations;
    pass = pass && ok;
    os << t.name << "/" << t.n << " " << r.iterations << " vs " << t.iterations << (ok ? "" : " [out]") << "; ";
  }
  report(2, pass, "Newton iteration counts within 50%", os.str());
}

void criterion_3() {
  struct Target {
    const char* name;
    int n;
    double error;
  };
  const Target targets[] = {{"c2_3d", 7, 0.0151},     {"c2_3d", 11, 0.0140},     {"c2_3d", 15, 0.0129},
                            {"c1_3d", 7, 0.0034},     {"c1_3d", 11, 0.0022},     {"c1_3d", 15, 0.0016},
                            {"blowup_3d", 7, 9.6e-3}, {"blowup_3d", 11, 5.2e-3}, {"blowup_3d", 15, 4.6e-3}};
  bool pass = true;
  std::ostringstream os;
  for (const auto& t : targets) {
    const Run r = run_newton(t.name, t.n);
    const bool ok = r.converged && within_factor(r.error, t.error, kErrorFactor) && r.seconds < k3dSeconds;
    pass = pass && ok;
    os << t.name << "/" << t.n << " " << fmt("%.3e", r.error) << " vs " << fmt("%.2e", t.error) << " in "
       << fmt("%.2fs", r.seconds) << (ok ? "" : " [out]") << "; ";
  }
  report(3, pass, "3D error table, factor 2, under 60 s each", os.str());
}

void criterion_4() {
  const auto problem = ma::get_problem("blowup_2d");
  const auto grid = make_grid(2, 31);
  const auto exact = ma::sample(grid, *problem.exact);

  SolverConfig standard;
  standard.scheme = ma::Scheme::standard;
  standard.damped = false;
  bool broke = false;
  std::ostringstream os;
  double min_diff = 1e300;
  double growth = 0.0;
  for (int k = 1; k <= 5 && !broke; ++k) {
    standard.max_newton_iters = k;
    const auto r = ma::newton_solve(problem, grid, standard, exact);
    const auto& hist = r.report.residual_history;
    double lowest = hist.front();
    for (double v : hist) {
      growth = std::max(growth, v / lowest);
      lowest = std::min(lowest, v);
    }
    min_diff = std::min(min_diff, ma::test::min_axis_difference(r.u));
    broke = min_diff < -10.0 * standard.newton_tol || growth >= 10.0 || !r.u.all_finite();
    if (r.report.iterations < k) {
      os << "standard stopped after " << r.report.iterations << " steps (" << ma::to_string(r.report.termination)
         << ", error " << fmt("%.3e", ma::max_error(r.u, *problem.exact)) << "); ";
      break;
    }
  }
  os << "standard: min axis difference " << fmt("%.3e", min_diff) << ", residual growth " << fmt("%.2fx", growth)
     << "; ";

  const auto hybrid = ma::newton_solve(problem, grid, SolverConfig{}, exact);
  os << "hybrid from exact: " << ma::to_string(hybrid.report.termination) << " in " << hybrid.report.iterations
     << " steps";
  report(4, broke && hybrid.report.converged(), "standard undamped Newton breaks down, hybrid converges", os.str());
}

void criterion_5() {
  bool pass = true;
  std::ostringstream os;
  for (const char* name : {"c2_2d", "c2_3d"}) {
    const auto problem = ma::get_problem(name);
    const auto grid = make_grid(problem.dim, problem.dim == 2 ? 21 : 9);
    for (auto scheme : {ma::Scheme::standard, ma::Scheme::monotone, ma::Scheme::hybrid}) {
      SolverConfig config;
      config.scheme = scheme;
      const ma::SchemeOperator op(problem, grid, config);
      double worst = 0.0;
      std::size_t excluded = 0;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto check = ma::test::jacobian_fd_check(op, ma::test::perturbed_iterate(problem, grid, seed), seed + 50,
                                                       kFdDelta);
        worst = std::max(worst, check.relative_error);
        excluded += check.rows_excluded;
      }
      pass = pass && worst <= kJacobianTol;
      os << problem.dim << "D " << ma::to_string(scheme) << " " << fmt("%.1e", worst) << " (" << excluded
         << " rows excluded); ";
    }
  }
  report(5, pass, "Jacobian matches finite differences to 1e-5", os.str());
}

void criterion_6() {
  const auto grid = make_grid(2, 21);
  const auto stencil = ma::make_stencil(2, 2);
  const ma::InteriorIndex interior(grid);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_point(0, interior.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_dir(0, stencil.directions.size() - 1);
  const double h2 = grid.h() * grid.h();

  auto random_u = [&](int kind) {
    GridFunction u(grid);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const Point x = grid.coordinate(p);
      u[p] = kind == 0 ? unit(rng) : 0.5 * (x[0] * x[0] + x[1] * x[1]) + h2 * (unit(rng) - 0.5);
    }
    return u;
  };

  int neighbor_violations = 0, centre_violations = 0, neighbor_checks = 0;
  for (int trial = 0; trial < kEllipticityTrials; ++trial) {
    const GridFunction u = random_u(trial % 2);
    const auto g = ma::BoundaryData::from_samples(u);
    const std::size_t p = interior.flat(pick_point(rng));
    const double before = ma::monotone_value(u, p, stencil, g).value;
    const auto st = ma::second_difference(u, p, stencil.directions[pick_dir(rng)], g).stencil;
    const auto& arm = unit(rng) < 0.5 ? st.plus : st.minus;
    const auto& other = &arm == &st.plus ? st.minus : st.plus;
    const auto target = arm.point ? arm.point : other.point;
    if (target) {
      GridFunction v = u;
      v[*target] += unit(rng) * h2;
      neighbor_violations += ma::monotone_value(v, p, stencil, g).value < before;
      ++neighbor_checks;
    }
    GridFunction w = u;
    w[p] += unit(rng) * h2;
    centre_violations += ma::monotone_value(w, p, stencil, g).value > before;
  }
  std::ostringstream os;
  os << neighbor_checks << " neighbour increases, " << neighbor_violations << " decreased the value; "
     << kEllipticityTrials << " centre increases, " << centre_violations << " increased it";
  report(6, neighbor_violations == 0 && centre_violations == 0, "degenerate ellipticity of the monotone scheme",
         os.str());
}

void criterion_7() {
  bool pass = true;
  std::ostringstream os;
  for (int dim : {2, 3}) {
    const int width = dim == 2 ? 2 : 1;
    const auto grid = make_grid(dim, dim == 2 ? 21 : 9);
    const auto stencil = ma::make_stencil(dim, width);
    const auto points = ma::test::deep_points(grid, width);
    std::mt19937_64 rng(70 + dim);
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    std::uniform_real_distribution<double> eig(0.3, 3.0);
    double worst_gap = 1e300, worst_equal = 0.0;
    for (int k = 0; k < kQuadraticMatrices; ++k) {
      const auto spd = ma::test::random_spd(dim, rng);
      std::array<std::array<double, 3>, 3> diag{};
      for (int a = 0; a < dim; ++a) diag[a][a] = eig(rng);
      for (int rep = 0; rep < 3; ++rep) {
        const std::size_t p = points[pick(rng)];
        const Point c = grid.coordinate(p);
        for (bool diagonal : {false, true}) {
          const auto& a = diagonal ? diag : spd;
          const auto field = ma::test::quadratic(a, dim, c);
          const auto u = ma::sample(grid, field);
          const double value = ma::monotone_value(u, p, stencil, ma::BoundaryData::from_field(field)).value;
          const double d = ma::test::det(a, dim);
          if (diagonal) {
            worst_equal = std::max(worst_equal, std::abs(value - d));
          } else {
            worst_gap = std::min(worst_gap, value - d);
          }
        }
      }
    }
    pass = pass && worst_gap >= 0.0 && worst_equal <= kQuadraticEqualityTol;
    os << dim << "D: min(value - det) " << fmt("%.2e", worst_gap) << ", diagonal max |value - det| "
       << fmt("%.1e", worst_equal) << "; ";
  }
  report(7, pass, "monotone value >= det(A) on quadratics, equality for diagonal A", os.str());
}

void criterion_8() {
  std::vector<double> logm, logt;
  std::ostringstream os;
  bool converged = true;
  for (int n : {31, 63, 127}) {
    const Run r = run_newton("c2_2d", n);
    converged = converged && r.converged;
    logm.push_back(std::log(double(n) * n));
    logt.push_back(std::log(r.seconds));
    os << "N=" << n << " " << fmt("%.3fs", r.seconds) << "; ";
  }
  const double mx = (logm[0] + logm[1] + logm[2]) / 3.0, my = (logt[0] + logt[1] + logt[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int k = 0; k < 3; ++k) {
    sxy += (logm[k] - mx) * (logt[k] - my);
    sxx += (logm[k] - mx) * (logm[k] - mx);
  }
  const double slope = sxy / sxx;
  os << "fitted exponent in M " << fmt("%.2f", slope);
  report(8, converged && slope <= kScalingExponent, "c2_2d solve time grows at most like M^1.8", os.str());
}

void criterion_9() {
  std::ostringstream os;
  const auto cone = ma::get_problem("cone_2d");
  const auto semi = ma::semi_implicit_solve_2d(cone, make_grid(2, 63), SolverConfig{});
  const Run newton_cone = run_newton("cone_2d", 63);
  const bool semi_fails = !semi.report.converged();
  os << "cone/63 semi-implicit " << ma::to_string(semi.report.termination) << " after " << semi.report.iterations
     << " of " << SolverConfig{}.max_semi_implicit_iters << " iterations, Newton "
     << newton_cone.termination << "; ";

  SolverConfig explicit_config;
  explicit_config.scheme = ma::Scheme::monotone;
  const auto ex = ma::explicit_solve(ma::get_problem("c2_2d"), make_grid(2, 31), explicit_config);
  const Run newton_c2 = run_newton("c2_2d", 31);
  const bool slow = ex.report.converged() && ex.report.iterations >= 10 * newton_c2.iterations;
  os << "c2/31 explicit " << ma::to_string(ex.report.termination) << " in " << ex.report.iterations
     << " iterations vs Newton " << newton_c2.iterations;
  report(9, semi_fails && newton_cone.converged && slow, "solver comparison ordering", os.str());
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) strict = strict || std::strcmp(argv[i], "--strict") == 0;

  const auto start = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 9 criteria passed (%.1f s)\n", 9 - g_failures, seconds);
  return strict && g_failures > 0 ? 1 : 0;
}
