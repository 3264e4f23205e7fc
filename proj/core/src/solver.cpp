#include "lqk/solver.hpp"

#include <algorithm>
#include <cmath>

#include "lqk/errors.hpp"
#include "lqk/ode.hpp"
#include "lqk/riccati.hpp"

namespace lqk {
namespace {

// Relative clipping of the kernel diagonal's eigenvalues before inversion.
constexpr double kDiagonalClip = 1e-10;
constexpr double kReproduceTol = 1e-8;
constexpr double kRangeTol = 1e-8;

void require_state(const LQProblem& p, const Vector& x0, const char* what) {
  if (x0.size() != p.state_dim()) {
    throw DomainError(std::string(what) + ": x0 must have " + std::to_string(p.state_dim()) +
                      " entries, got " + std::to_string(x0.size()));
  }
}

// Samples u = G x at the nodes of x, with left limits at coefficient breakpoints.
DenseSolution feedback_control(const LQProblem& p, const DenseSolution& J, const DenseSolution& x) {
  const auto breaks = p.breakpoints();
  const auto& times = x.times();
  std::vector<Matrix> values(times.size());
  std::vector<std::size_t> jump_nodes;
  std::vector<Matrix> left_values;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const bool last = i + 1 == times.size();
    if (last) {
      const Matrix b = p.B().left_limit(t);
      values[i] = -SpdFactor(p.R().left_limit(t)).solve(b.transpose() * J(t)) * x.node_value(i);
      continue;
    }
    values[i] = feedback_gain(p, J(t), t) * x.node_value(i);
    if (i > 0 && std::binary_search(breaks.begin(), breaks.end(), t)) {
      const Matrix b = p.B().left_limit(t);
      jump_nodes.push_back(i);
      left_values.push_back(-SpdFactor(p.R().left_limit(t)).solve(b.transpose() * J(t)) *
                            x.node_value(i));
    }
  }
  return DenseSolution::from_samples(times, std::move(values), std::move(jump_nodes),
                                     std::move(left_values));
}

}  // namespace

const char* to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::kKernel: return "kernel";
    case SolveMethod::kFeedback: return "feedback";
    case SolveMethod::kMultipoint: return "multipoint";
  }
  return "unknown";
}

LQSolveResult solve_kernel(const KernelOperator& op, const Vector& x0) {
  const LQProblem& p = op.problem();
  require_state(p, x0, "solve_kernel");
  const Matrix kd = op.diagonal(p.t0());
  const Vector p0 = sym_pinv_clipped(kd, kDiagonalClip) * x0;
  const double miss = (kd * p0 - x0).norm();
  if (!(miss <= kReproduceTol * std::max(1.0, x0.norm()))) {
    throw DegenerateProblemError("kernel diagonal cannot reproduce x0 (defect " +
                                 std::to_string(miss) + ")");
  }
  LQSolveResult out;
  out.method = SolveMethod::kKernel;
  out.covectors.push_back({p.t0(), p0});
  out.trajectory.x = op.column().map_linear([&p0](const Matrix& k) -> Matrix { return k * p0; });
  out.trajectory.u = recover_control(p, out.trajectory.x);
  out.value = p0.dot(x0);
  out.interpolation_error = (out.trajectory.x.node_value(0).col(0) - x0).norm();
  return out;
}

LQSolveResult solve_kernel(const LQProblem& p, const Vector& x0, int steps) {
  KernelSettings settings;
  settings.steps = steps;
  return solve_kernel(KernelOperator(p, settings), x0);
}

LQSolveResult solve_feedback(const LQProblem& p, const DenseSolution& J, const Vector& x0, int steps) {
  require_state(p, x0, "solve_feedback");
  IntegrateOptions opts;
  opts.extra_nodes = p.breakpoints();
  DenseSolution x = integrate_matrix_ode(
      [&](double t, const Matrix& state) -> Matrix {
        return (p.A()(t) + p.B()(t) * feedback_gain(p, J(t), t)) * state;
      },
      Matrix(x0), p.t0(), p.t_final(), steps, opts);
  LQSolveResult out;
  out.method = SolveMethod::kFeedback;
  out.trajectory.u = feedback_control(p, J, x);
  out.trajectory.x = std::move(x);
  out.value = riccati_value(J, p.t0(), x0);
  return out;
}

LQSolveResult solve_feedback(const LQProblem& p, const Vector& x0, int steps) {
  return solve_feedback(p, solve_riccati(p, steps), x0, steps);
}

LQSolveResult solve_multipoint(const KernelOperator& op, std::vector<StateConstraint> constraints) {
  const LQProblem& p = op.problem();
  if (constraints.empty()) throw DomainError("solve_multipoint: no constraints");
  std::vector<double> times;
  for (const auto& c : constraints) {
    require_state(p, c.value, "solve_multipoint");
    times.push_back(c.time);
  }
  const GramResult g = op.gram(times);
  const Eigen::Index n = p.state_dim();
  const auto k = static_cast<Eigen::Index>(constraints.size());
  Vector stacked(k * n);
  for (Eigen::Index i = 0; i < k; ++i) stacked.segment(i * n, n) = constraints[static_cast<std::size_t>(i)].value;

  const Vector coeffs = pinv_svd(g.gram) * stacked;
  const double miss = (g.gram * coeffs - stacked).norm();
  if (!(miss <= kRangeTol * (1.0 + stacked.norm()))) {
    throw InfeasibleInterpolationError("constraints are not in the range of the Gram matrix (defect " +
                                       std::to_string(miss) + ")");
  }

  LQSolveResult out;
  out.method = SolveMethod::kMultipoint;
  std::vector<DenseSolution> terms;
  for (Eigen::Index i = 0; i < k; ++i) {
    const Vector pi = coeffs.segment(i * n, n);
    out.covectors.push_back({times[static_cast<std::size_t>(i)], pi});
    terms.push_back(g.sections[static_cast<std::size_t>(i)].K.map_linear(
        [&pi](const Matrix& m) -> Matrix { return m * pi; }));
  }
  out.trajectory.x = sum_on_common_grid(terms);
  out.trajectory.u = recover_control(p, out.trajectory.x);
  out.value = coeffs.dot(stacked);
  for (const auto& c : constraints) {
    const double t = std::clamp(c.time, p.t0(), p.t_final());
    out.interpolation_error =
        std::max(out.interpolation_error, (out.trajectory.x(t).col(0) - c.value).norm());
  }
  return out;
}

LQSolveResult solve_multipoint(const LQProblem& p, std::vector<StateConstraint> constraints, int steps) {
  KernelSettings settings;
  settings.steps = steps;
  return solve_multipoint(KernelOperator(p, settings), std::move(constraints));
}

double evaluate_cost(const LQProblem& p, const ControlledTrajectory& traj, int quad_intervals) {
  return lq_inner_product(p, traj, traj, quad_intervals);
}

double trajectory_gap(const ControlledTrajectory& a, const ControlledTrajectory& b) {
  double gap = 0.0;
  for (const auto* pair : {&a, &b}) {
    const auto& other = pair == &a ? b : a;
    for (std::size_t i = 0; i < pair->x.size(); ++i) {
      const double t = pair->x.times()[i];
      gap = std::max(gap, (pair->x.node_value(i) - other.x(t)).norm());
    }
  }
  return gap;
}

ControlledTrajectory rollout_piecewise_control(const LQProblem& p, const Vector& x0,
                                               const std::vector<double>& breaks,
                                               const std::vector<Vector>& values, int steps) {
  require_state(p, x0, "rollout");
  std::vector<Matrix> pieces(values.begin(), values.end());
  for (const auto& v : pieces) {
    if (v.rows() != p.input_dim()) throw DomainError("rollout: control has the wrong dimension");
  }
  const MatrixSchedule control = MatrixSchedule::piecewise_constant(breaks, std::move(pieces));
  IntegrateOptions opts;
  opts.extra_nodes = p.breakpoints();
  for (double b : breaks) opts.extra_nodes.push_back(b);
  DenseSolution x = integrate_matrix_ode(
      [&](double t, const Matrix& state) -> Matrix { return p.A()(t) * state + p.B()(t) * control(t); },
      Matrix(x0), p.t0(), p.t_final(), steps, opts);

  const auto& times = x.times();
  std::vector<Matrix> u(times.size());
  std::vector<std::size_t> jump_nodes;
  std::vector<Matrix> left_values;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const bool last = i + 1 == times.size();
    u[i] = last ? control.left_limit(times[i]) : control(times[i]);
    if (i > 0 && !last && std::binary_search(breaks.begin(), breaks.end(), times[i])) {
      jump_nodes.push_back(i);
      left_values.push_back(control.left_limit(times[i]));
    }
  }
  DenseSolution controls =
      DenseSolution::from_samples(times, std::move(u), std::move(jump_nodes), std::move(left_values));
  return {std::move(x), std::move(controls)};
}

}  // namespace lqk
