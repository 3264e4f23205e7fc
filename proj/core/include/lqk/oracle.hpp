#pragma once

#include <vector>

#include "lqk/linalg.hpp"
#include "lqk/problem.hpp"

namespace lqk {

/// Forward-Euler discretization of an LQ problem on a uniform grid:
/// A_k = I + h A(t_k), B_k = h B(t_k), stage costs h Q(t_k), h R(t_k).
///
/// Shares no code with the continuous solvers; it exists to certify them.
struct DiscreteLQ {
  double h = 0.0;
  std::vector<double> times;  // t_0 .. t_K
  std::vector<Matrix> A, B;  // A_k, B_k
  std::vector<Matrix> Q, R;  // Q(t_k), R(t_k); the recursion scales them by h
  Matrix terminal;

  static DiscreteLQ from_problem(const LQProblem& p, int steps);
  std::size_t stages() const { return A.size(); }
};

struct DiscreteTrajectory {
  std::vector<double> times;
  std::vector<Vector> states;    // K + 1
  std::vector<Vector> controls;  // K
};

/// Backward recursion
///   P_k = hQ_k + A_kᵀP_{k+1}A_k − A_kᵀP_{k+1}B_k (hR_k + B_kᵀP_{k+1}B_k)⁻¹ B_kᵀP_{k+1}A_k,
/// with P_K = J_T. Returns P_0 .. P_K.
std::vector<Matrix> discrete_riccati(const DiscreteLQ& d);

/// x0ᵀ P_0 x0; O(h) accurate. Requires steps >= 10.
double discrete_value(const LQProblem& p, const Vector& x0, int steps);

/// Forward rollout with the discrete optimal gains.
DiscreteTrajectory discrete_trajectory(const LQProblem& p, const Vector& x0, int steps);

/// 2 v(h/2) − v(h).
double richardson_extrapolate(double coarse, double fine);

}  // namespace lqk
