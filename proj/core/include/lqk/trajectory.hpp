#pragma once

#include "lqk/dense_solution.hpp"
#include "lqk/problem.hpp"

namespace lqk {

inline constexpr double kDefaultDynTol = 1e-6;

/// A state trajectory x(·) together with a control u(·) that drives it.
struct ControlledTrajectory {
  DenseSolution x;  // N x 1 samples
  DenseSolution u;  // M x 1 samples
};

/// Largest node-wise ‖x' − A x − B u‖ / (1 + ‖x‖), taking one-sided values
/// at jump nodes of either component.
double dynamics_defect(const LQProblem& p, const ControlledTrajectory& traj);

/// Minimal-norm control of a trajectory: u = B^⊖ (x' − A x) at every node,
/// with B^⊖ the R-weighted pseudoinverse. One-sided values are kept at jump
/// nodes of x and at coefficient breakpoints.
DenseSolution recover_control(const LQProblem& p, const DenseSolution& x,
                              double rank_tol = kDefaultRankTol);

/// True when the trajectory satisfies the dynamics within `dyn_tol`.
bool in_trajectory_space(const LQProblem& p, const ControlledTrajectory& traj,
                         double dyn_tol = kDefaultDynTol);

}  // namespace lqk
