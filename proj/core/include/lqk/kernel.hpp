#pragma once

#include <span>
#include <vector>

#include "lqk/dense_solution.hpp"
#include "lqk/ode.hpp"
#include "lqk/problem.hpp"
#include "lqk/riccati.hpp"
#include "lqk/trajectory.hpp"

namespace lqk {

struct KernelSettings {
  int steps = kDefaultSteps;
  /// Smallest reciprocal condition number accepted for the shooting system.
  double shooting_rcond = 1e-12;
  /// Evaluate Gram columns on separate threads. Output is identical either way.
  bool parallel = false;
};

/// One kernel column σ ↦ K(σ, t) with its costate Π(σ, t), both N×N.
struct KernelSection {
  double t = 0.0;
  DenseSolution K;
  DenseSolution Pi;
  double shooting_rcond = 0.0;
};

struct GramResult {
  Matrix gram;             // symmetrized kN×kN block matrix
  double asymmetry = 0.0;  // ‖Γ − Γᵀ‖_F before symmetrization
  std::vector<KernelSection> sections;  // one per time, on a shared grid
};

/// Reproducing kernel of the space of controlled trajectories on [t0, T]
/// equipped with the LQ cost inner product
///
///   <x1, x2> = x1(T)ᵀ J_T x2(T) + ∫ x1ᵀ Q x2 + u1ᵀ R u2.
///
/// Construction solves the Riccati pair and the closed-loop transition
/// Φ_cl(·, t0); afterwards the object is immutable and all queries are
/// const and safe to call concurrently.
///
/// Entries K(s, t) for t > t0 come from a two-point boundary value problem
/// in (K(·,t), Π(·,t)) whose forcing switches at σ = t:
///
///   ∂σ K = A K + B R⁻¹ Bᵀ (Π + Φ_A(t0,σ)ᵀ − [σ ≥ t] Φ_A(t,σ)ᵀ)
///   ∂σ Π = −Aᵀ Π + Q K
///   Π(t0, t) = −I,   J_T K(T, t) + Π(T, t) = Φ_A(t,T)ᵀ − Φ_A(t0,T)ᵀ.
///
/// It is solved by single shooting: the 2N×2N fundamental matrix and one
/// particular solution are integrated together from t0, then an N×N linear
/// system fixes the unknown K(t0, t).
class KernelOperator {
 public:
  explicit KernelOperator(LQProblem problem, KernelSettings settings = {});

  const LQProblem& problem() const { return problem_; }
  const KernelSettings& settings() const { return settings_; }
  const RiccatiSolution& riccati() const { return riccati_; }

  /// K(t0q, t0q) of the space on [t0q, T], i.e. M(t0q) from the dual
  /// Riccati equation of the restricted problem.
  Matrix diagonal(double t0q) const;

  /// σ ↦ K(σ, t0) = Φ_cl(σ, t0) M(t0).
  const DenseSolution& column() const { return column_; }
  const DenseSolution& closed_loop_transition() const { return closed_loop_; }

  /// Solves the boundary value problem for column time t. Extra nodes are
  /// added to the integration grid (used to share a grid across columns).
  KernelSection section(double t, std::span<const double> extra_nodes = {}) const;

  /// K(s, t).
  Matrix entry(double s, double t) const;

  /// Block (i, j) = K(t_i, t_j).
  GramResult gram(std::span<const double> times) const;

  /// σ ↦ K(σ, t) p as a controlled trajectory, control recovered from the
  /// minimal-norm formula.
  ControlledTrajectory section_trajectory(const KernelSection& section, const Vector& p) const;

  /// |pᵀ x(t) − <x, K(·,t) p>|.
  double reproducing_residual(const ControlledTrajectory& traj, double t, const Vector& p,
                              int quad_intervals) const;

 private:
  /// Φ_A(t0, σ).
  Matrix inverse_transition(double sigma) const { return adjoint_transition_(sigma).transpose(); }

  LQProblem problem_;
  KernelSettings settings_;
  RiccatiSolution riccati_;
  TransitionMatrix adjoint_transition_;  // Φ_{−Aᵀ}(·, t0) = Φ_A(t0, ·)ᵀ
  DenseSolution closed_loop_;
  DenseSolution column_;
};

/// <x1, x2> by composite Simpson quadrature on `quad_intervals` uniform
/// subintervals with coefficient breakpoints and trajectory jump times
/// inserted. Throws DomainError when a trajectory does not span [t0, T].
double lq_inner_product(const LQProblem& p, const ControlledTrajectory& a,
                        const ControlledTrajectory& b, int quad_intervals);

Matrix kernel_diagonal(const LQProblem& p, double t0q, int steps);
DenseSolution kernel_column(const LQProblem& p, int steps);
Matrix kernel_full(const LQProblem& p, double s, double t, int steps);
GramResult gram_matrix(const LQProblem& p, std::span<const double> times, int steps);
double reproducing_residual(const LQProblem& p, const ControlledTrajectory& traj, double t,
                            const Vector& pvec, int steps, int quad_intervals);

}  // namespace lqk
