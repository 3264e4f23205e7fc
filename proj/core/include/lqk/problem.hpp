#pragma once

#include <string>
#include <vector>

#include "lqk/linalg.hpp"
#include "lqk/schedule.hpp"

namespace lqk {

/// Thresholds used when checking the standing assumptions of a problem.
struct AssumptionTolerances {
  double pd_tol = 1e-10;   // J_T eigenvalues must exceed this
  double psd_tol = 1e-9;   // Q eigenvalues must be >= -psd_tol
  double r_min = 1e-8;     // R eigenvalues must be >= r_min
  double sym_tol = 1e-9;   // relative asymmetry allowed in Q, R, J_T
};

/// Finite-horizon time-varying LQ problem
///
///   minimize  x(T)ᵀ J_T x(T) + ∫_{t0}^{T} xᵀQx + uᵀRu dt
///   subject to x' = A x + B u.
///
/// The constructor only checks shapes and t0 < T; positivity assumptions are
/// checked by `validate_problem`.
class LQProblem {
 public:
  LQProblem(double t0, double t_final, MatrixSchedule a, MatrixSchedule b, MatrixSchedule q,
            MatrixSchedule r, Matrix terminal_weight);

  Eigen::Index state_dim() const { return a_.rows(); }
  Eigen::Index input_dim() const { return b_.cols(); }
  double t0() const { return t0_; }
  double t_final() const { return t_final_; }
  const MatrixSchedule& A() const { return a_; }
  const MatrixSchedule& B() const { return b_; }
  const MatrixSchedule& Q() const { return q_; }
  const MatrixSchedule& R() const { return r_; }
  const Matrix& terminal_weight() const { return terminal_weight_; }

  /// Union of the coefficient breakpoints strictly inside (t0, T), sorted.
  std::vector<double> breakpoints() const;

  /// B(t) R(t)^{-1} B(t)ᵀ, right-continuous.
  Matrix control_weight(double t) const;

  /// Same coefficients on [new_t0, T]. The schedules must cover the new
  /// horizon for the result to be usable.
  LQProblem restricted(double new_t0) const;

  friend bool operator==(const LQProblem& a, const LQProblem& b);

 private:
  double t0_;
  double t_final_;
  MatrixSchedule a_, b_, q_, r_;
  Matrix terminal_weight_;
};

struct Violation {
  std::string assumption;  // short message, e.g. "R not uniformly positive definite"
  double time;             // NaN when not tied to a time
  double value;            // offending eigenvalue or defect
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks the standing assumptions on a uniform grid of `grid_points` times.
/// Never throws on a bad problem; every failure ends up in the report.
ValidationReport validate_problem(const LQProblem& p, int grid_points = 101,
                                  const AssumptionTolerances& tol = {});

}  // namespace lqk
