#include "lqk/trajectory.hpp"

#include <algorithm>
#include <vector>

#include "lqk/errors.hpp"

namespace lqk {

double dynamics_defect(const LQProblem& p, const ControlledTrajectory& traj) {
  double worst = 0.0;
  const auto& times = traj.x.times();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    for (Side side : {Side::kLeft, Side::kRight}) {
      if (side == Side::kLeft && i == 0) continue;
      if (side == Side::kRight && i + 1 == times.size()) continue;
      const Matrix a = side == Side::kLeft ? p.A().left_limit(t) : p.A()(t);
      const Matrix b = side == Side::kLeft ? p.B().left_limit(t) : p.B()(t);
      const Matrix& x = traj.x.node_value(i, side);
      const Matrix& dx = traj.x.node_derivative(i, side);
      const Matrix u = traj.u(t, side);
      const double r = (dx - a * x - b * u).norm() / (1.0 + x.norm());
      worst = std::max(worst, r);
    }
  }
  return worst;
}

DenseSolution recover_control(const LQProblem& p, const DenseSolution& x, double rank_tol) {
  if (x.rows() != p.state_dim() || x.cols() != 1) {
    throw DomainError("recover_control: trajectory must be an N-vector");
  }
  const auto& times = x.times();
  const auto breaks = p.breakpoints();
  auto control_at = [&](std::size_t i, Side side) -> Matrix {
    const double t = times[i];
    const bool left = side == Side::kLeft;
    const Matrix a = left ? p.A().left_limit(t) : p.A()(t);
    const Matrix b = left ? p.B().left_limit(t) : p.B()(t);
    const Matrix r = left ? p.R().left_limit(t) : p.R()(t);
    return weighted_pinv_b(b, r, rank_tol) *
           (x.node_derivative(i, side) - a * x.node_value(i, side));
  };
  std::vector<Matrix> values(times.size());
  std::vector<std::size_t> jump_nodes;
  std::vector<Matrix> left_values;
  std::size_t next_jump = 0;
  const auto& jumps = x.jumps();
  for (std::size_t i = 0; i < times.size(); ++i) {
    values[i] = control_at(i, Side::kRight);
    bool is_jump = false;
    while (next_jump < jumps.size() && jumps[next_jump].index < i) ++next_jump;
    if (next_jump < jumps.size() && jumps[next_jump].index == i) is_jump = true;
    if (std::binary_search(breaks.begin(), breaks.end(), times[i])) is_jump = true;
    if (is_jump && i > 0) {
      jump_nodes.push_back(i);
      left_values.push_back(control_at(i, Side::kLeft));
    }
  }
  if (times.size() > 1) values.back() = control_at(times.size() - 1, Side::kLeft);
  return DenseSolution::from_samples(times, std::move(values), std::move(jump_nodes),
                                     std::move(left_values));
}

bool in_trajectory_space(const LQProblem& p, const ControlledTrajectory& traj, double dyn_tol) {
  return dynamics_defect(p, traj) <= dyn_tol;
}

}  // namespace lqk
