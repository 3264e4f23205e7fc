#include "lqk/riccati.hpp"

#include <algorithm>

#include "lqk/errors.hpp"
#include "lqk/ode.hpp"

namespace lqk {
namespace {

SymmetricFlow integrate_symmetric(const LQProblem& p, const MatrixRhs& rhs, const Matrix& terminal,
                                  int steps, const char* name) {
  SymmetricFlow flow;
  IntegrateOptions opts;
  opts.extra_nodes = p.breakpoints();
  opts.project = [&flow](double, Matrix& y) {
    flow.max_step_asymmetry = std::max(flow.max_step_asymmetry, asymmetry(y));
    y = symmetrize(y);
  };
  flow.solution = integrate_matrix_ode(rhs, terminal, p.t_final(), p.t0(), steps, opts);
  const auto& times = flow.solution.times();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double lmin = min_eigenvalue(flow.solution.values()[i]);
    if (!(lmin > 0.0)) {
      throw BlowUpError(std::string(name) + " lost positive definiteness (min eigenvalue " +
                            std::to_string(lmin) + ")",
                        times[i]);
    }
  }
  return flow;
}

}  // namespace

double RiccatiSolution::duality_defect() const {
  if (J.times() != M.times()) throw DomainError("duality_defect: J and M grids differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < J.size(); ++i) {
    const Matrix& j = J.values()[i];
    const Matrix prod = j * M.values()[i];
    worst = std::max(worst, (prod - Matrix::Identity(j.rows(), j.cols())).norm());
  }
  return worst;
}

SymmetricFlow solve_riccati_flow(const LQProblem& p, int steps) {
  const MatrixRhs rhs = [&p](double t, const Matrix& j) -> Matrix {
    const Matrix a = p.A()(t);
    const Matrix ja = j * a;
    return -(ja.transpose() + ja - j * p.control_weight(t) * j + p.Q()(t));
  };
  return integrate_symmetric(p, rhs, p.terminal_weight(), steps, "Riccati solution");
}

DenseSolution solve_riccati(const LQProblem& p, int steps) {
  return solve_riccati_flow(p, steps).solution;
}

SymmetricFlow solve_dual_riccati_flow(const LQProblem& p, int steps) {
  const MatrixRhs rhs = [&p](double t, const Matrix& m) -> Matrix {
    const Matrix am = p.A()(t) * m;
    return am + am.transpose() - p.control_weight(t) + m * p.Q()(t) * m;
  };
  return integrate_symmetric(p, rhs, spd_inverse(p.terminal_weight()), steps,
                             "dual Riccati solution");
}

DenseSolution solve_dual_riccati(const LQProblem& p, int steps) {
  return solve_dual_riccati_flow(p, steps).solution;
}

RiccatiSolution solve_riccati_pair(const LQProblem& p, int steps) {
  auto j = solve_riccati_flow(p, steps);
  auto m = solve_dual_riccati_flow(p, steps);
  return RiccatiSolution{std::move(j.solution), std::move(m.solution), j.max_step_asymmetry,
                         m.max_step_asymmetry};
}

Matrix feedback_gain(const LQProblem& p, const Matrix& j_at_t, double t) {
  const Matrix b = p.B()(t);
  return -SpdFactor(p.R()(t)).solve(b.transpose() * j_at_t);
}

double riccati_value(const DenseSolution& J, double t0, const Vector& x0) {
  const Matrix j = J(t0);
  if (x0.size() != j.rows()) throw DomainError("riccati_value: x0 has the wrong dimension");
  return x0.dot(j * x0);
}

DenseSolution solve_adjoint(const LQProblem& p, const DenseSolution& xbar, int steps) {
  if (xbar.rows() != p.state_dim() || xbar.cols() != 1) {
    throw DomainError("solve_adjoint: trajectory must be an N-vector");
  }
  const MatrixRhs rhs = [&p, &xbar](double t, const Matrix& costate) -> Matrix {
    return -p.A()(t).transpose() * costate + p.Q()(t) * xbar(t);
  };
  IntegrateOptions opts;
  opts.extra_nodes = p.breakpoints();
  for (double t : xbar.jump_times()) opts.extra_nodes.push_back(t);
  const Matrix terminal = -p.terminal_weight() * xbar(p.t_final(), Side::kLeft);
  return integrate_matrix_ode(rhs, terminal, p.t_final(), p.t0(), steps, opts);
}

}  // namespace lqk
