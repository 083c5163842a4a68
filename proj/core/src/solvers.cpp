#include "ma/solvers.hpp"

#include "ma/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace ma {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int factorial(int d) { return d <= 1 ? 1 : d * factorial(d - 1); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

// Points where the standard scheme has positive weight; only there can a
// step build a concave bump that still satisfies the scheme.
std::vector<std::uint8_t> standard_active(const SchemeOperator& op, const InteriorIndex& interior) {
  std::vector<std::uint8_t> mask(interior.size(), 0);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    mask[i] = op.scheme() == Scheme::hybrid && op.weights().w[interior.flat(i)] > 0.0;
  }
  return mask;
}

double min_axis_difference(const GridFunction& u, const InteriorIndex& interior, const std::vector<std::uint8_t>& mask) {
  const GridSpec& grid = u.grid();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < interior.size(); ++i) {
    if (!mask[i]) continue;
    const std::size_t p = interior.flat(i);
    const MultiIndex c = grid.multi_index(p);
    for (int a = 0; a < grid.dim(); ++a) {
      MultiIndex lo = c;
      MultiIndex hi = c;
      --lo[a];
      ++hi[a];
      m = std::min(m, (u.at(lo) - 2.0 * u[p] + u.at(hi)) * inv_h2);
    }
  }
  return m;
}

}  // namespace

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::standard: return "standard";
    case Scheme::monotone: return "monotone";
    case Scheme::hybrid: return "hybrid";
  }
  return "?";
}

std::string_view to_string(SolverKind s) noexcept {
  switch (s) {
    case SolverKind::newton: return "newton";
    case SolverKind::explicit_euler: return "explicit";
    case SolverKind::semi_implicit: return "semi-implicit";
  }
  return "?";
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::damping_exhausted: return "damping_exhausted";
    case Termination::linear_failure: return "linear_failure";
    case Termination::diverged: return "diverged";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "standard" || s == "N") return Scheme::standard;
  if (s == "monotone" || s == "M") return Scheme::monotone;
  if (s == "hybrid" || s == "H") return Scheme::hybrid;
  throw ConfigError("unknown scheme '" + std::string(s) + "' (standard, monotone, hybrid)");
}

SolverKind parse_solver(std::string_view s) {
  if (s == "newton") return SolverKind::newton;
  if (s == "explicit") return SolverKind::explicit_euler;
  if (s == "semi-implicit" || s == "semi_implicit") return SolverKind::semi_implicit;
  throw ConfigError("unknown solver '" + std::string(s) + "' (newton, explicit, semi-implicit)");
}

void SolverConfig::validate() const {
  if (stencil_width < 0) throw ConfigError("stencil width must be >= 0");
  if (max_newton_iters < 0 || max_explicit_iters < 0 || max_semi_implicit_iters < 0) {
    throw ConfigError("iteration caps must be >= 0");
  }
  if (!(newton_tol > 0.0) || !(semi_implicit_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(min_damping > 0.0 && min_damping <= 1.0)) throw ConfigError("min_damping must lie in (0, 1]");
  if (eps_reg && !(*eps_reg >= 0.0)) throw ConfigError("eps_reg must be >= 0");
  if (weight_eps && !(*weight_eps > 0.0)) throw ConfigError("weight eps must be positive");
  if (!(weight_ramp > 0.0)) throw ConfigError("weight ramp must be positive");
  if (!(explicit_dt_factor > 0.0)) throw ConfigError("explicit dt factor must be positive");
  if (coarse_n != 0 && coarse_n < 3) throw ConfigError("coarse grid needs n >= 3 (or 0 for the target grid)");
  if (max_shift_levels < 0) throw ConfigError("max_shift_levels must be >= 0");
  if (!(shift_trigger > 0.0 && shift_trigger <= 1.0)) throw ConfigError("shift_trigger must lie in (0, 1]");
  if (!(convexity_slack >= 0.0)) throw ConfigError("convexity slack must be >= 0");
  if (!(projection_tol > 0.0)) throw ConfigError("projection tolerance must be positive");
}

std::string SolveReport::to_json() const {
  nlohmann::json j;
  j["iterations"] = iterations;
  j["termination"] = std::string(to_string(termination));
  j["converged"] = converged();
  j["final_residual"] = final_residual();
  j["seconds"] = seconds;
  j["init_seconds"] = init_seconds;
  j["residual_history"] = residual_history;
  j["damping"] = damping;
  j["shift"] = shift;
  j["update_history"] = update_history;
  if (!message.empty()) j["message"] = message;
  return j.dump(2);
}

std::string SolveReport::csv_header() { return "n,iterations,seconds,final_residual,termination"; }

std::string SolveReport::csv_row(int n) const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,", n, iterations, seconds, final_residual());
  return std::string(buf) + std::string(to_string(termination));
}

SchemeOperator::SchemeOperator(const Problem& problem, const GridSpec& grid, const SolverConfig& config)
    : scheme_(config.scheme),
      f_(problem.rhs(grid)),
      g_(problem.boundary()),
      bases_(make_stencil(grid.dim(), config.width_for(grid.dim()))),
      weights_(config.scheme == Scheme::hybrid
                   ? weight_field(f_, problem.boundary_smooth, config.weight_eps.value_or(grid.h()),
                                  config.weight_ramp)
                   : constant_weight(grid, config.scheme == Scheme::standard ? 1.0 : 0.0)),
      eps_reg_(config.eps_reg.value_or(default_regularization(grid))) {
  if (problem.dim != grid.dim()) throw ConfigError("problem '" + problem.name + "' does not match the grid dimension");
}

SchemeOperator::SchemeOperator(Scheme scheme, GridFunction f, BoundaryData g, StencilBasisSet bases,
                               WeightField weights, double eps_reg)
    : scheme_(scheme),
      f_(std::move(f)),
      g_(std::move(g)),
      bases_(std::move(bases)),
      weights_(std::move(weights)),
      eps_reg_(eps_reg) {
  if (bases_.dim != f_.grid().dim()) throw ConfigError("stencil dimension does not match the grid");
  if (!(weights_.w.grid() == f_.grid())) throw ConfigError("weight field lives on another grid");
}

Residual SchemeOperator::residual(const GridFunction& u) const {
  switch (scheme_) {
    case Scheme::standard: return residual_standard(u, f_);
    case Scheme::monotone: return residual_monotone(u, f_, bases_, g_);
    case Scheme::hybrid: return residual_hybrid(u, f_, bases_, weights_, g_);
  }
  throw ConfigError("unknown scheme");
}

SparseMatrix SchemeOperator::jacobian(const GridFunction& u, const Residual& residual) const {
  switch (scheme_) {
    case Scheme::standard: return jacobian_standard(u);
    case Scheme::monotone: return jacobian_monotone(u, residual, bases_, eps_reg_, g_);
    case Scheme::hybrid: return jacobian_hybrid(u, residual, bases_, weights_, eps_reg_, g_);
  }
  throw ConfigError("unknown scheme");
}

ConvexProjector::ConvexProjector(const GridSpec& grid, std::span<const Direction> directions, const BoundaryData& g)
    : interior_(grid), per_point_(directions.size()) {
  // The average along an arm pair is a u+ + b u-, which for shortened arms
  // is the linear interpolant at the centre.
  arms_.reserve(interior_.size() * per_point_);
  for (std::size_t i = 0; i < interior_.size(); ++i) {
    for (const Direction& nu : directions) {
      const DirectionalStencil s = directional_stencil(grid, interior_.flat(i), nu, g);
      Arm arm;
      arm.a = s.plus.weight / -s.center_weight;
      arm.b = s.minus.weight / -s.center_weight;
      if (s.plus.point) arm.plus = *s.plus.point;
      else arm.plus_sample = s.plus.sample;
      if (s.minus.point) arm.minus = *s.minus.point;
      else arm.minus_sample = s.minus.sample;
      arms_.push_back(arm);
    }
  }
}

GridFunction ConvexProjector::operator()(GridFunction v, const ConvexifyOptions& options) const {
  constexpr std::size_t none = Arm::none;
  const std::size_t m = interior_.size();
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double largest = 0.0;
    // Alternating sweep order carries information across the grid both ways.
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = sweep % 2 == 0 ? k : m - 1 - k;
      const std::size_t p = interior_.flat(i);
      double lowest = v[p];
      const Arm* arm = arms_.data() + i * per_point_;
      for (std::size_t j = 0; j < per_point_; ++j, ++arm) {
        const double up = arm->plus != none ? v[arm->plus] : arm->plus_sample;
        const double um = arm->minus != none ? v[arm->minus] : arm->minus_sample;
        lowest = std::min(lowest, arm->a * up + arm->b * um);
      }
      largest = std::max(largest, v[p] - lowest);
      v[p] = lowest;
    }
    if (largest < options.tolerance) break;
  }
  return v;
}

GridFunction convexify(const GridFunction& u, std::span<const Direction> directions, const BoundaryData& g,
                       const ConvexifyOptions& options) {
  return ConvexProjector(u.grid(), directions, g)(u, options);
}

GridFunction initialize(const Problem& problem, const GridSpec& grid, const SolverConfig& config) {
  config.validate();
  const int nc = config.coarse_n == 0 ? grid.n() : std::min(config.coarse_n, grid.n());
  const GridSpec coarse = make_grid(grid.dim(), nc);
  const BoundaryData g = problem.boundary();

  GridFunction rhs = problem.rhs(coarse);
  const double scale = static_cast<double>(factorial(grid.dim()));
  for (std::size_t p = 0; p < rhs.size(); ++p) rhs[p] = std::sqrt(std::max(0.0, scale * rhs[p]));

  GridFunction uc = solve_poisson(coarse, rhs, g);
  const StencilBasisSet stencil = make_stencil(grid.dim(), config.width_for(grid.dim()));
  uc = convexify(uc, stencil.directions, g);
  if (nc == grid.n()) return uc;
  GridFunction u = g.apply(resample(uc, grid));
  return u;
}

SolveResult newton_solve(const Problem& problem, const GridSpec& grid, const SolverConfig& config,
                         std::optional<GridFunction> initial) {
  config.validate();
  const auto start = Clock::now();
  const SchemeOperator op(problem, grid, config);
  GridFunction u0 = initial ? std::move(*initial) : initialize(problem, grid, config);
  const double init_seconds = elapsed(start);
  SolveResult result = newton_solve(op, std::move(u0), config);
  result.report.init_seconds = init_seconds;
  result.report.seconds = elapsed(start);
  return result;
}

SolveResult newton_solve(const SchemeOperator& op, GridFunction initial, const SolverConfig& config) {
  config.validate();
  const auto start = Clock::now();
  if (!(initial.grid() == op.grid())) throw ConfigError("initial iterate lives on another grid");
  const InteriorIndex interior(op.grid());
  const bool safeguard = config.convexity_safeguard && op.scheme() != Scheme::standard;
  const std::vector<std::uint8_t> guarded = standard_active(op, interior);
  std::optional<ConvexProjector> project;
  if (safeguard) project.emplace(op.grid(), op.bases().directions, op.boundary());

  SolveResult out{std::move(initial), {}};
  SolveReport& rep = out.report;
  Residual r = op.residual(out.u);
  double norm = r.max_norm();
  rep.residual_history.push_back(norm);
  rep.termination = Termination::max_iters;

  GridFunction trial = out.u;
  while (true) {
    if (norm <= config.newton_tol) {
      rep.termination = Termination::converged;
      break;
    }
    if (rep.iterations >= config.max_newton_iters) break;

    const SparseMatrix jac = op.jacobian(out.u, r);
    double diag = 0.0;
    for (std::size_t i = 0; i < jac.rows(); ++i) diag = std::max(diag, std::abs(jac.at(i, i)));
    const double floor = safeguard ? std::min(min_axis_difference(out.u, interior, guarded), 0.0) - config.convexity_slack
                                   : 0.0;

    struct Candidate {
      double alpha = 0.0;
      double shift = 0.0;
      GridFunction u;
      Residual r;
      double norm = 0.0;
    };
    std::optional<Candidate> best;
    auto line_search = [&](std::span<const double> du, double shift) {
      for (double alpha = 1.0; alpha >= config.min_damping; alpha *= 0.5) {
        for (std::size_t i = 0; i < interior.size(); ++i) {
          const std::size_t p = interior.flat(i);
          trial[p] = out.u[p] - alpha * du[i];
        }
        if (safeguard) {
          if (min_axis_difference(trial, interior, guarded) < floor) continue;
          trial = (*project)(std::move(trial), {config.projection_tol, 100000});
        }
        Residual rt = op.residual(trial);
        const double nt = rt.max_norm();
        if (!config.damped || (std::isfinite(nt) && nt < norm)) {
          if (!best || nt < best->norm) best = Candidate{alpha, shift, trial, std::move(rt), nt};
          return alpha;
        }
      }
      return 0.0;
    };

    bool solved = false;
    const int levels = config.damped ? config.max_shift_levels : 0;
    for (int level = 0; level <= levels; ++level) {
      // J is negative definite in the good case, so the shift is subtracted.
      const double shift = level == 0 ? 0.0 : diag * std::pow(10.0, level - 5);
      const LinearSolveResult step = solve_linear(level == 0 ? jac : jac.shifted(-shift), r.values);
      if (!step.report.success) {
        if (level == 0) rep.message = step.report.message;
        continue;
      }
      solved = true;
      if (line_search(step.x, shift) >= config.shift_trigger) break;
    }
    if (!solved) {
      rep.termination = Termination::linear_failure;
      break;
    }
    if (!best) {
      rep.termination = Termination::damping_exhausted;
      rep.message = "no damping factor reduced the residual";
      break;
    }
    rep.shift.push_back(best->shift);
    out.u = std::move(best->u);
    r = std::move(best->r);
    norm = best->norm;
    ++rep.iterations;
    rep.residual_history.push_back(norm);
    rep.damping.push_back(best->alpha);
    if (!std::isfinite(norm)) {
      rep.termination = Termination::diverged;
      rep.message = "residual is not finite";
      break;
    }
  }
  rep.seconds = elapsed(start);
  return out;
}

SolveResult explicit_solve(const Problem& problem, const GridSpec& grid, const SolverConfig& config,
                           std::optional<GridFunction> initial) {
  config.validate();
  if (config.scheme == Scheme::standard) {
    throw ConfigError("explicit iteration needs a monotone or hybrid scheme");
  }
  const auto start = Clock::now();
  const SchemeOperator op(problem, grid, config);
  const InteriorIndex interior(grid);
  SolveResult out{initial ? std::move(*initial) : initialize(problem, grid, config), {}};
  SolveReport& rep = out.report;
  rep.init_seconds = elapsed(start);

  const double dt = config.explicit_dt_factor * grid.h() * grid.h();
  Residual r = op.residual(out.u);
  double norm = r.max_norm();
  double lowest = norm;
  rep.residual_history.push_back(norm);
  rep.termination = Termination::max_iters;

  while (true) {
    if (norm <= config.newton_tol) {
      rep.termination = Termination::converged;
      break;
    }
    if (rep.iterations >= config.max_explicit_iters) break;
    for (std::size_t i = 0; i < interior.size(); ++i) out.u[interior.flat(i)] += dt * r.values[i];
    r = op.residual(out.u);
    norm = r.max_norm();
    ++rep.iterations;
    rep.residual_history.push_back(norm);
    if (!std::isfinite(norm) || norm > 10.0 * lowest) {
      rep.termination = Termination::diverged;
      rep.message = "residual grew past 10x its minimum; reduce the time step";
      break;
    }
    lowest = std::min(lowest, norm);
  }
  rep.seconds = elapsed(start);
  return out;
}

SolveResult semi_implicit_solve_2d(const Problem& problem, const GridSpec& grid, const SolverConfig& config,
                                   std::optional<GridFunction> initial) {
  config.validate();
  if (grid.dim() != 2) throw ConfigError("semi-implicit iteration is two-dimensional only");
  const auto start = Clock::now();
  const GridFunction f = problem.rhs(grid);
  const BoundaryData g = problem.boundary();
  const InteriorIndex interior(grid);
  const PoissonSolver poisson(grid);

  GridFunction rhs(grid);
  SolveResult out{GridFunction(grid), {}};
  if (initial) {
    out.u = std::move(*initial);
  } else {
    for (std::size_t i = 0; i < interior.size(); ++i) {
      const std::size_t p = interior.flat(i);
      rhs[p] = std::sqrt(std::max(0.0, 2.0 * f[p]));
    }
    out.u = poisson.solve(rhs, g);
  }
  SolveReport& rep = out.report;
  rep.init_seconds = elapsed(start);
  rep.residual_history.push_back(residual_standard(out.u, f).max_norm());
  rep.termination = Termination::max_iters;

  while (rep.iterations < config.max_semi_implicit_iters) {
    for (std::size_t i = 0; i < interior.size(); ++i) {
      const std::size_t p = interior.flat(i);
      const SmallMatrix hess = discrete_hessian(out.u, p);
      const double frob = hess(0, 0) * hess(0, 0) + hess(1, 1) * hess(1, 1) + 2.0 * hess(0, 1) * hess(0, 1);
      rhs[p] = std::sqrt(std::max(0.0, 2.0 * f[p] + frob));
    }
    GridFunction next = poisson.solve(rhs, g);
    std::vector<double> diff(interior.size());
    for (std::size_t i = 0; i < interior.size(); ++i) diff[i] = next[interior.flat(i)] - out.u[interior.flat(i)];
    const double change = max_abs(diff);
    out.u = std::move(next);
    ++rep.iterations;
    rep.update_history.push_back(change);
    rep.residual_history.push_back(residual_standard(out.u, f).max_norm());
    if (!std::isfinite(change)) {
      rep.termination = Termination::diverged;
      rep.message = "iterate is not finite";
      break;
    }
    if (change <= config.semi_implicit_tol) {
      rep.termination = Termination::converged;
      break;
    }
  }
  rep.seconds = elapsed(start);
  return out;
}

SolveResult solve(const Problem& problem, const GridSpec& grid, const SolverConfig& config, SolverKind kind) {
  switch (kind) {
    case SolverKind::newton: return newton_solve(problem, grid, config);
    case SolverKind::explicit_euler: return explicit_solve(problem, grid, config);
    case SolverKind::semi_implicit: return semi_implicit_solve_2d(problem, grid, config);
  }
  throw ConfigError("unknown solver");
}

}  // namespace ma
