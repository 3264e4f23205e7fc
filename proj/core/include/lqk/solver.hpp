#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lqk/kernel.hpp"
#include "lqk/problem.hpp"
#include "lqk/trajectory.hpp"

namespace lqk {

enum class SolveMethod { kKernel, kFeedback, kMultipoint };

const char* to_string(SolveMethod method);

struct Covector {
  double time;
  Vector p;
};

struct LQSolveResult {
  SolveMethod method = SolveMethod::kKernel;
  std::vector<Covector> covectors;  // empty for the feedback route
  ControlledTrajectory trajectory;
  double value = 0.0;
  /// Largest ‖x̄(t_i) − c_i‖ over the pinned conditions.
  double interpolation_error = 0.0;
};

/// Pinned state x(t_i) = c_i.
struct StateConstraint {
  double time;
  Vector value;
};

/// Optimal trajectory from x0 through the kernel: p0 = K(t0,t0)⁻¹ x0,
/// x̄(s) = K(s,t0) p0, V = p0ᵀ x0. Throws DegenerateProblemError when the
/// kernel diagonal cannot reproduce x0 within 1e-8.
LQSolveResult solve_kernel(const KernelOperator& op, const Vector& x0);
LQSolveResult solve_kernel(const LQProblem& p, const Vector& x0, int steps);

/// Closed-loop rollout x' = (A + B G) x with G = −R⁻¹BᵀJ, V = x0ᵀ J(t0) x0.
LQSolveResult solve_feedback(const LQProblem& p, const DenseSolution& J, const Vector& x0, int steps);
LQSolveResult solve_feedback(const LQProblem& p, const Vector& x0, int steps);

/// Minimum-norm trajectory through the pinned states: Γ P = C solved with
/// the pseudoinverse, x̄ = Σ K(·,t_i) p_i, V = Σ p_iᵀ c_i. Throws
/// InfeasibleInterpolationError when C is not in the range of Γ.
LQSolveResult solve_multipoint(const KernelOperator& op, std::vector<StateConstraint> constraints);
LQSolveResult solve_multipoint(const LQProblem& p, std::vector<StateConstraint> constraints, int steps);

/// Cost of a trajectory: its squared LQ norm.
double evaluate_cost(const LQProblem& p, const ControlledTrajectory& traj, int quad_intervals);

/// Sup over the nodes of `a` of ‖a.x(t) − b.x(t)‖.
double trajectory_gap(const ControlledTrajectory& a, const ControlledTrajectory& b);

/// Integrates x' = A x + B u from x0 under a piecewise-constant control
/// (values[k] on [breaks[k-1], breaks[k])), with the breaks as grid nodes.
ControlledTrajectory rollout_piecewise_control(const LQProblem& p, const Vector& x0,
                                               const std::vector<double>& breaks,
                                               const std::vector<Vector>& values, int steps);

}  // namespace lqk
