#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lqk/errors.hpp"
#include "lqk/kernel.hpp"
#include "lqk/oracle.hpp"
#include "lqk/problem_io.hpp"
#include "lqk/riccati.hpp"
#include "lqk/solver.hpp"
#include "lqk/verify.hpp"

namespace lqk::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string problem_path;
  std::optional<int> steps;
  std::string out_path;
};

ProblemFile load_checked(const Common& c) {
  ProblemFile file = load_problem_file(c.problem_path);
  const ValidationReport report = validate_problem(file.problem, 101, file.assumptions);
  if (!report.valid()) throw InputError("problem violates the standing assumptions: " + report.summary());
  return file;
}

int resolve_steps(const Common& c, const ProblemFile& f) {
  if (c.steps) return *c.steps;
  if (f.settings.steps) return *f.settings.steps;
  return default_steps();
}

std::vector<double> row_major(const Matrix& m) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Writes to the file at `path`, or to `fallback` when the path is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot open output file " + path);
  write(file);
}

void csv_header(std::ostream& os, std::initializer_list<std::string> fixed,
                std::initializer_list<std::pair<std::string, Eigen::Index>> vectors,
                std::initializer_list<std::pair<std::string, Eigen::Index>> matrices = {},
                std::initializer_list<std::string> trailing = {}) {
  bool first = true;
  auto sep = [&] {
    if (!first) os << ',';
    first = false;
  };
  for (const auto& f : fixed) {
    sep();
    os << f;
  }
  for (const auto& [name, len] : vectors) {
    for (Eigen::Index i = 1; i <= len; ++i) {
      sep();
      os << name << '_' << i;
    }
  }
  for (const auto& [name, dim] : matrices) {
    for (Eigen::Index i = 1; i <= dim; ++i) {
      for (Eigen::Index j = 1; j <= dim; ++j) {
        sep();
        os << name << '_' << i << j;
      }
    }
  }
  for (const auto& f : trailing) {
    sep();
    os << f;
  }
  os << '\n';
}

void csv_values(std::ostream& os, std::initializer_list<double> fixed,
                std::initializer_list<std::vector<double>> blocks) {
  bool first = true;
  auto put = [&](double v) {
    if (!first) os << ',';
    first = false;
    os << v;
  };
  for (double v : fixed) put(v);
  for (const auto& b : blocks) {
    for (double v : b) put(v);
  }
  os << '\n';
}

void write_trajectory_csv(std::ostream& os, const LQProblem& p, const ControlledTrajectory& traj) {
  os << std::setprecision(17);
  csv_header(os, {"t"}, {{"x", p.state_dim()}, {"u", p.input_dim()}});
  const auto& times = traj.x.times();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const bool last = i + 1 == times.size();
    const Matrix u = traj.u(times[i], last ? Side::kLeft : Side::kRight);
    csv_values(os, {times[i]}, {row_major(traj.x.node_value(i)), row_major(u)});
  }
}

ordered_json covectors_json(const LQSolveResult& r) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : r.covectors) arr.push_back({{"time", c.time}, {"p", to_std(c.p)}});
  return arr;
}

std::vector<StateConstraint> read_constraints(const std::string& arg, Eigen::Index n) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_constraints_json(buffer.str(), n);
  }
  return parse_constraints_json(arg, n);
}

Vector require_x0(const std::optional<std::string>& flag, const ProblemFile& f) {
  if (flag) {
    Vector x0 = parse_vector_arg(*flag, "x0");
    if (x0.size() != f.problem.state_dim()) {
      throw ParseError("x0", "expected " + std::to_string(f.problem.state_dim()) + " entries, got " +
                                 std::to_string(x0.size()));
    }
    return x0;
  }
  if (f.x0) return *f.x0;
  throw InputError("x0 is required: pass --x0 or add \"x0\" to the problem file");
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  Common common;
  std::optional<std::string> x0;
  std::string method = "kernel";
  std::optional<std::string> constraints;
  std::string summary_path;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const ProblemFile f = load_checked(a.common);
  const LQProblem& p = f.problem;
  const int steps = resolve_steps(a.common, f);

  std::vector<StateConstraint> constraints = f.constraints;
  if (a.constraints) constraints = read_constraints(*a.constraints, p.state_dim());
  std::optional<Vector> x0;
  if (a.method != "multipoint") {
    x0 = require_x0(a.x0, f);
  } else if (constraints.empty()) {
    throw InputError("constraints are required for method multipoint: pass --constraints");
  }

  ordered_json summary;
  summary["method"] = a.method;
  std::optional<LQSolveResult> primary;
  if (a.method == "feedback") {
    primary = solve_feedback(p, *x0, steps);
  } else {
    KernelSettings settings;
    settings.steps = steps;
    const KernelOperator op(p, settings);
    if (a.method == "multipoint") {
      primary = solve_multipoint(op, constraints);
      summary["interpolation_error"] = primary->interpolation_error;
    } else {
      primary = solve_kernel(op, *x0);
      if (a.method == "both") {
        const LQSolveResult fb = solve_feedback(p, op.riccati().J, *x0, steps);
        summary["value_kernel"] = primary->value;
        summary["value_feedback"] = fb.value;
        summary["gap"] = trajectory_gap(primary->trajectory, fb.trajectory);
      }
    }
  }
  summary["value"] = primary->value;
  summary["covectors"] = covectors_json(*primary);
  summary["settings"] = {{"steps", steps}};

  if (!a.common.out_path.empty()) {
    emit(a.common.out_path, out, [&](std::ostream& os) { write_trajectory_csv(os, p, primary->trajectory); });
  }
  emit(a.summary_path, out, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  return kExitOk;
}

// -------------------------------------------------------------- riccati

int cmd_riccati(const Common& c, std::ostream& out) {
  const ProblemFile f = load_checked(c);
  const LQProblem& p = f.problem;
  const RiccatiSolution sol = solve_riccati_pair(p, resolve_steps(c, f));
  const Eigen::Index n = p.state_dim();
  emit(c.out_path, out, [&](std::ostream& os) {
    os << std::setprecision(17);
    csv_header(os, {"t"}, {}, {{"J", n}, {"M", n}}, {"defect"});
    for (std::size_t i = 0; i < sol.J.size(); ++i) {
      const Matrix& j = sol.J.node_value(i);
      const Matrix& m = sol.M.node_value(i);
      const double defect = (j * m - Matrix::Identity(n, n)).norm();
      std::vector<double> tail{defect};
      csv_values(os, {sol.J.times()[i]}, {row_major(j), row_major(m), tail});
    }
  });
  return kExitOk;
}

// --------------------------------------------------------------- kernel

int cmd_kernel(const Common& c, int grid, std::ostream& out) {
  if (grid < 2) throw InputError("--grid must be at least 2");
  const ProblemFile f = load_checked(c);
  const LQProblem& p = f.problem;
  KernelSettings settings;
  settings.steps = resolve_steps(c, f);
  const KernelOperator op(p, settings);
  std::vector<double> times(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    times[static_cast<std::size_t>(i)] = p.t0() + (p.t_final() - p.t0()) * i / (grid - 1);
  }
  times.back() = p.t_final();
  std::vector<KernelSection> sections;
  for (double t : times) sections.push_back(op.section(t, times));
  emit(c.out_path, out, [&](std::ostream& os) {
    os << std::setprecision(17);
    csv_header(os, {"s", "t"}, {}, {{"K", p.state_dim()}});
    for (double s : times) {
      for (std::size_t j = 0; j < times.size(); ++j) {
        csv_values(os, {s, times[j]}, {row_major(sections[j].K(s))});
      }
    }
  });
  return kExitOk;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> tolerances;
  std::optional<std::string> x0;
  std::optional<int> quad_intervals;
  int oracle_steps = 2000;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const ProblemFile f = load_checked(a.common);
  VerifyOptions opts;
  opts.steps = resolve_steps(a.common, f);
  opts.seed = a.seed ? *a.seed : f.settings.seed.value_or(42);
  opts.quad_intervals = a.quad_intervals ? *a.quad_intervals : f.settings.quad_intervals.value_or(2000);
  opts.oracle_steps = a.oracle_steps;
  opts.tolerances = f.settings.tolerances;
  if (a.tolerances) {
    nlohmann::json t;
    try {
      t = nlohmann::json::parse(*a.tolerances);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("tolerances", e.what());
    }
    if (!t.is_object()) throw ParseError("tolerances", "expected an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (!it.value().is_number()) throw ParseError("tolerances." + it.key(), "expected a number");
      opts.tolerances[it.key()] = it.value().get<double>();
    }
  }
  for (const auto& [key, value] : opts.tolerances) {
    const auto& table = default_tolerances();
    if (std::none_of(table.begin(), table.end(), [&](const auto& e) { return e.first == key; })) {
      throw ParseError("tolerances." + key, "unknown check");
    }
    if (!(value > 0.0)) throw ParseError("tolerances." + key, "must be positive");
  }
  if (a.x0) {
    opts.x0 = require_x0(a.x0, f);
  } else if (f.x0) {
    opts.x0 = f.x0;
  }
  const RunReport report = run_verification(f.problem, opts);
  emit(a.common.out_path, out, [&](std::ostream& os) { os << report.to_json() << '\n'; });
  return report.pass() ? kExitOk : kExitVerifyFailed;
}

// -------------------------------------------------------------- compare

int cmd_compare(const Common& c, const std::optional<std::string>& x0_arg, int oracle_steps,
                std::ostream& out) {
  const ProblemFile f = load_checked(c);
  const LQProblem& p = f.problem;
  const Vector x0 = require_x0(x0_arg, f);
  const int steps = resolve_steps(c, f);
  KernelSettings settings;
  settings.steps = steps;
  const KernelOperator op(p, settings);
  const double vk = solve_kernel(op, x0).value;
  const double vf = riccati_value(op.riccati().J, p.t0(), x0);
  const double vh = discrete_value(p, x0, oracle_steps);
  const double vh2 = discrete_value(p, x0, 2 * oracle_steps);
  const double extrapolated = richardson_extrapolate(vh, vh2);
  auto rel = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
  };
  ordered_json j;
  j["value_kernel"] = vk;
  j["value_feedback"] = vf;
  j["value_oracle_h"] = vh;
  j["value_oracle_h2"] = vh2;
  j["extrapolated"] = extrapolated;
  j["relative_gap_kernel_feedback"] = rel(vk, vf);
  j["relative_gap_extrapolated_kernel"] = rel(extrapolated, vk);
  j["relative_gap_oracle_h_kernel"] = rel(vh, vk);
  j["settings"] = {{"steps", steps}, {"oracle_steps", oracle_steps}};
  emit(c.out_path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& c, const char* out_help) {
  cmd->add_option("problem", c.problem_path, "Problem file (JSON)")->required();
  cmd->add_option("--steps", c.steps, "RK4 steps (default: problem settings, then LQK_DEFAULT_STEPS, then 4000)")
      ->check(CLI::Range(1, 100'000'000));
  cmd->add_option("-o,--out", c.out_path, out_help);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-horizon LQ control via the Riccati equation and the LQ reproducing kernel", "lqk"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Optimal trajectory from x0, or through pinned states");
  add_common(solve, solve_args.common, "Trajectory CSV path (t, x_i, u_j); omitted means no CSV");
  solve->add_option("--x0", solve_args.x0, "Initial state, e.g. [1,0]");
  solve->add_option("--method", solve_args.method, "kernel | feedback | multipoint | both")
      ->check(CLI::IsMember({"kernel", "feedback", "multipoint", "both"}));
  solve->add_option("--constraints", solve_args.constraints, "JSON [[t,[c...]],...] or a file holding it");
  solve->add_option("--summary", solve_args.summary_path, "Summary JSON path (default stdout)");

  Common riccati_args;
  auto* riccati = app.add_subcommand("riccati", "J(t), M(t) and the duality defect on the grid");
  add_common(riccati, riccati_args, "CSV path (default stdout)");

  Common kernel_args;
  int grid = 11;
  auto* kernel = app.add_subcommand("kernel", "Kernel entries on a uniform grid");
  add_common(kernel, kernel_args, "CSV path (default stdout)");
  kernel->add_option("--grid", grid, "Grid points per axis")->check(CLI::Range(2, 100000));

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the numerical certification checks");
  add_common(verify, verify_args.common, "Report path (default stdout)");
  verify->add_option("--seed", verify_args.seed, "Random seed (default: problem settings, then 42)");
  verify->add_option("--tolerances", verify_args.tolerances, "JSON object overriding check tolerances");
  verify->add_option("--x0", verify_args.x0, "Initial state for the solver checks (default all ones)");
  verify->add_option("--quad-intervals", verify_args.quad_intervals, "Simpson intervals")
      ->check(CLI::Range(2, 100'000'000));
  verify->add_option("--oracle-steps", verify_args.oracle_steps, "Coarse discrete-oracle steps")
      ->check(CLI::Range(10, 100'000'000));

  Common compare_args;
  std::optional<std::string> compare_x0;
  int compare_oracle_steps = 2000;
  auto* compare = app.add_subcommand("compare", "Kernel, feedback and discrete-oracle values");
  add_common(compare, compare_args, "JSON path (default stdout)");
  compare->add_option("--x0", compare_x0, "Initial state");
  compare->add_option("--oracle-steps", compare_oracle_steps, "Coarse discrete-oracle steps")
      ->check(CLI::Range(10, 100'000'000));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve) return cmd_solve(solve_args, out);
    if (*riccati) return cmd_riccati(riccati_args, out);
    if (*kernel) return cmd_kernel(kernel_args, grid, out);
    if (*verify) return cmd_verify(verify_args, out);
    if (*compare) return cmd_compare(compare_args, compare_x0, compare_oracle_steps, out);
  } catch (const ParseError& e) {
    err << "error: " << e.where() << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace lqk::cli
