#pragma once

#include "lqk/dense_solution.hpp"
#include "lqk/problem.hpp"

namespace lqk {

/// Solutions J(·,T) and M(·,T) of the Riccati equation and its dual on [t0, T].
struct RiccatiSolution {
  DenseSolution J;
  DenseSolution M;
  /// Largest ‖Y − Yᵀ‖_F seen before each per-step re-symmetrization.
  double max_step_asymmetry_J = 0.0;
  double max_step_asymmetry_M = 0.0;

  /// max over nodes of ‖J(t) M(t) − I‖_F. Both solutions must share a grid.
  double duality_defect() const;
};

/// Result of a symmetric-matrix Riccati solve with its drift diagnostic.
struct SymmetricFlow {
  DenseSolution solution;
  double max_step_asymmetry = 0.0;
};

/// −J' = AᵀJ + JA − J B R⁻¹ Bᵀ J + Q, J(T) = J_T, integrated backward.
/// Throws BlowUpError on a non-finite value or when a node loses positive
/// definiteness.
SymmetricFlow solve_riccati_flow(const LQProblem& p, int steps);
DenseSolution solve_riccati(const LQProblem& p, int steps);

/// M' = AM + MAᵀ − B R⁻¹ Bᵀ + M Q M, M(T) = J_T⁻¹, integrated backward
/// independently of J.
SymmetricFlow solve_dual_riccati_flow(const LQProblem& p, int steps);
DenseSolution solve_dual_riccati(const LQProblem& p, int steps);

/// Both equations on the same grid.
RiccatiSolution solve_riccati_pair(const LQProblem& p, int steps);

/// G(t) = −R(t)⁻¹ B(t)ᵀ J. Throws SingularityError when R(t) is not PD.
Matrix feedback_gain(const LQProblem& p, const Matrix& j_at_t, double t);

/// x0ᵀ J(t0) x0.
double riccati_value(const DenseSolution& J, double t0, const Vector& x0);

/// Costate p' = −Aᵀp + Q x̄, p(T) = −J_T x̄(T), integrated backward.
DenseSolution solve_adjoint(const LQProblem& p, const DenseSolution& xbar, int steps);

}  // namespace lqk
