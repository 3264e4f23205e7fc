#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lqk/dense_solution.hpp"
#include "lqk/schedule.hpp"

namespace lqk {

inline constexpr int kDefaultSteps = 4000;

/// Step count taken from LQK_DEFAULT_STEPS when set to a positive integer,
/// otherwise kDefaultSteps.
int default_steps();

using MatrixRhs = std::function<Matrix(double t, const Matrix& y)>;

struct IntegrateOptions {
  /// Times inserted as grid nodes. The right-hand side may jump there; the
  /// solution records one-sided derivatives at each of them.
  std::vector<double> extra_nodes;
  /// Applied to the state after every step (e.g. re-symmetrization).
  std::function<void(double t, Matrix& y)> project;
};

/// Uniform grid a + (b - a) k / steps, k = 0..steps, ordered from a to b,
/// with the extra nodes strictly between a and b merged in. An extra node
/// closer than 1e-6 of a step to a uniform node replaces it.
std::vector<double> make_grid(double a, double b, int steps, std::span<const double> extra = {});

/// Classical fourth-order Runge-Kutta on the grid from `make_grid`.
///
/// Integrates backward when a > b. Each stage at an interval endpoint is
/// evaluated one ulp inside the interval, so a right-hand side that is
/// discontinuous at a grid node is sampled from the correct side. The
/// result stores the value and right-hand side at every node for cubic
/// Hermite dense output. Throws BlowUpError on a non-finite state and
/// DomainError when steps < 1.
DenseSolution integrate_matrix_ode(const MatrixRhs& rhs, const Matrix& y0, double a, double b,
                                   int steps, const IntegrateOptions& options = {});

/// Φ_A(t, s): solution at t of Z' = A(τ) Z with Z(s) = I. Supports t < s.
Matrix transition_matrix(const MatrixSchedule& a, double t, double s, int steps);

/// Dense state-transition matrix Φ_A(·, anchor) on [lo, hi].
class TransitionMatrix {
 public:
  TransitionMatrix(const MatrixSchedule& a, double anchor, double lo, double hi, int steps);

  double anchor() const { return anchor_; }
  /// Φ_A(t, anchor).
  Matrix operator()(double t) const { return solution_(t); }
  const DenseSolution& solution() const { return solution_; }

 private:
  double anchor_;
  DenseSolution solution_;
};

}  // namespace lqk
