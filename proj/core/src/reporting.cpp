#include "ma/reporting.hpp"

#include "ma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ma {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& s, const std::string& what) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DataError("cannot parse " + what + " '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DataError("cannot parse " + what + " '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw DataError("cannot parse " + what + " '" + s + "'");
}

constexpr const char* kStudyHeader = "problem,n,scheme,solver,iterations,seconds,max_error,termination";

}  // namespace

double max_error(const GridFunction& u, const Field& exact) {
  return max_error(u, sample(u.grid(), exact));
}

double max_error(const GridFunction& u, const GridFunction& exact) {
  if (!(u.grid() == exact.grid())) throw ConfigError("max_error: grids differ");
  double m = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    const double d = std::abs(u[p] - exact[p]);
    if (std::isnan(d)) return d;
    m = std::max(m, d);
  }
  return m;
}

std::vector<GradientSample> gradient_map(const GridFunction& u, bool circle_only) {
  const GridSpec& grid = u.grid();
  if (grid.dim() != 2) throw ConfigError("gradient map export is two-dimensional only");
  const int n = grid.n();
  const double h = grid.h();

  auto derivative = [&](const MultiIndex& m, int axis) {
    auto at = [&](int offset) {
      MultiIndex q = m;
      q[axis] += offset;
      return u.at(q);
    };
    if (m[axis] == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (m[axis] == n - 1) return (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
    return (at(1) - at(-1)) / (2.0 * h);
  };

  std::vector<GradientSample> out;
  out.reserve(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Point x = grid.coordinate(p);
    if (circle_only) {
      const double dx = x[0] - 0.5;
      const double dy = x[1] - 0.5;
      if (dx * dx + dy * dy > 0.25 * (1.0 + 1e-12)) continue;
    }
    const MultiIndex m = grid.multi_index(p);
    out.push_back({x, {derivative(m, 0), derivative(m, 1)}});
  }
  return out;
}

void write_gradient_map(std::ostream& os, const std::vector<GradientSample>& samples) {
  os << "x,y,gx,gy\n";
  for (const auto& s : samples) {
    os << format_real(s.source[0]) << ',' << format_real(s.source[1]) << ',' << format_real(s.gradient[0]) << ','
       << format_real(s.gradient[1]) << '\n';
  }
}

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows) {
  os << kStudyHeader << '\n';
  for (const auto& r : rows) {
    os << r.problem << ',' << r.n << ',' << r.scheme << ',' << r.solver << ',' << r.iterations << ','
       << format_real(r.seconds) << ',' << format_real(r.max_error) << ',' << r.termination << '\n';
  }
}

std::vector<StudyRow> read_study_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kStudyHeader) {
    throw DataError("study CSV: expected header '" + std::string(kStudyHeader) + "'");
  }
  std::vector<StudyRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw DataError("study CSV line " + std::to_string(lineno) + ": expected 8 fields");
    StudyRow r;
    r.problem = f[0];
    r.n = parse_int(f[1], "n");
    r.scheme = f[2];
    r.solver = f[3];
    r.iterations = parse_int(f[4], "iterations");
    r.seconds = parse_real(f[5], "seconds");
    r.max_error = parse_real(f[6], "max_error");
    r.termination = f[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

StudyConfig parse_study_config(std::istream& is) {
  StudyConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "study config line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "problems") {
        cfg.problems.clear();
        for (const auto& p : split(value, ',')) {
          if (!p.empty()) cfg.problems.push_back(p);
        }
      } else if (key == "ladder") {
        cfg.ladder.clear();
        for (const auto& p : split(value, ',')) {
          if (!p.empty()) cfg.ladder.push_back(parse_int(p, "ladder entry"));
        }
      } else if (key == "scheme") {
        cfg.solver_config.scheme = parse_scheme(value);
      } else if (key == "solver") {
        cfg.solver = parse_solver(value);
      } else if (key == "stencil_width") {
        cfg.solver_config.stencil_width = parse_int(value, key);
      } else if (key == "newton_tol") {
        cfg.solver_config.newton_tol = parse_real(value, key);
      } else if (key == "max_newton_iters") {
        cfg.solver_config.max_newton_iters = parse_int(value, key);
      } else if (key == "explicit_dt_factor") {
        cfg.solver_config.explicit_dt_factor = parse_real(value, key);
      } else if (key == "max_explicit_iters") {
        cfg.solver_config.max_explicit_iters = parse_int(value, key);
      } else if (key == "max_semi_implicit_iters") {
        cfg.solver_config.max_semi_implicit_iters = parse_int(value, key);
      } else if (key == "semi_implicit_tol") {
        cfg.solver_config.semi_implicit_tol = parse_real(value, key);
      } else if (key == "min_damping") {
        cfg.solver_config.min_damping = parse_real(value, key);
      } else if (key == "damped") {
        cfg.solver_config.damped = parse_bool(value, key);
      } else if (key == "convexity_safeguard") {
        cfg.solver_config.convexity_safeguard = parse_bool(value, key);
      } else if (key == "weight_eps") {
        cfg.solver_config.weight_eps = parse_real(value, key);
      } else if (key == "weight_ramp") {
        cfg.solver_config.weight_ramp = parse_real(value, key);
      } else if (key == "coarse_n") {
        cfg.solver_config.coarse_n = parse_int(value, key);
      } else if (key == "output") {
        cfg.output = value;
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      throw ConfigError(where + e.what());
    }
  }
  for (const auto& p : cfg.problems) (void)get_problem(p);
  cfg.solver_config.validate();
  return cfg;
}

std::vector<StudyRow> run_study(const std::vector<std::string>& problems, const std::vector<int>& ladder,
                                const SolverConfig& config, SolverKind solver,
                                const std::optional<std::filesystem::path>& output) {
  std::vector<StudyRow> rows;
  for (const auto& name : problems) {
    for (int n : ladder) {
      StudyRow row;
      row.problem = name;
      row.n = n;
      row.scheme = std::string(to_string(config.scheme));
      row.solver = std::string(to_string(solver));
      row.max_error = std::numeric_limits<double>::quiet_NaN();
      try {
        const Problem problem = get_problem(name);
        const GridSpec grid = make_grid(problem.dim, n);
        const SolveResult result = solve(problem, grid, config, solver);
        row.iterations = result.report.iterations;
        row.seconds = result.report.seconds;
        row.termination = std::string(to_string(result.report.termination));
        if (problem.exact) row.max_error = max_error(result.u, *problem.exact);
      } catch (const LinearSolveError&) {
        row.termination = std::string(to_string(Termination::linear_failure));
      } catch (const std::exception&) {
        row.termination = "error";
      }
      rows.push_back(std::move(row));
    }
  }
  if (output) {
    std::ofstream os(*output);
    if (!os) throw DataError("cannot open " + output->string() + " for writing");
    write_study_csv(os, rows);
  }
  return rows;
}

std::vector<StudyRow> run_study(const StudyConfig& config) {
  return run_study(config.problems, config.ladder, config.solver_config, config.solver, config.output);
}

}  // namespace ma
