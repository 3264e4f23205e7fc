#include "lqk/oracle.hpp"

#include <limits>

#include "lqk/errors.hpp"

namespace lqk {
namespace {

// Gain (hR + BᵀPB)⁻¹ BᵀPA for stage k given P_{k+1}.
Matrix stage_gain(const DiscreteLQ& d, std::size_t k, const Matrix& p_next) {
  const Matrix bp = d.B[k].transpose() * p_next;
  const Matrix inner = d.h * d.R[k] + bp * d.B[k];
  Eigen::LLT<Matrix> llt(0.5 * (inner + inner.transpose()));
  if (llt.info() != Eigen::Success) {
    throw SingularityError("discrete Riccati inner matrix is not positive definite",
                           std::numeric_limits<double>::quiet_NaN());
  }
  return llt.solve(bp * d.A[k]);
}

}  // namespace

DiscreteLQ DiscreteLQ::from_problem(const LQProblem& p, int steps) {
  if (steps < 10) throw DomainError("discrete oracle needs at least 10 steps");
  DiscreteLQ d;
  const double span = p.t_final() - p.t0();
  d.h = span / steps;
  const Eigen::Index n = p.state_dim();
  d.times.resize(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) d.times[static_cast<std::size_t>(k)] = p.t0() + span * k / steps;
  d.times.back() = p.t_final();
  for (int k = 0; k < steps; ++k) {
    const double t = d.times[static_cast<std::size_t>(k)];
    d.A.push_back(Matrix::Identity(n, n) + d.h * p.A()(t));
    d.B.push_back(d.h * p.B()(t));
    d.Q.push_back(p.Q()(t));
    d.R.push_back(p.R()(t));
  }
  d.terminal = p.terminal_weight();
  return d;
}

std::vector<Matrix> discrete_riccati(const DiscreteLQ& d) {
  const std::size_t stages = d.stages();
  std::vector<Matrix> p(stages + 1);
  p[stages] = d.terminal;
  for (std::size_t k = stages; k-- > 0;) {
    const Matrix& next = p[k + 1];
    const Matrix gain = stage_gain(d, k, next);
    const Matrix at_p = d.A[k].transpose() * next;
    Matrix pk = d.h * d.Q[k] + at_p * d.A[k] - at_p * d.B[k] * gain;
    p[k] = 0.5 * (pk + pk.transpose());
  }
  return p;
}

double discrete_value(const LQProblem& p, const Vector& x0, int steps) {
  if (x0.size() != p.state_dim()) throw DomainError("discrete_value: x0 has the wrong dimension");
  const auto d = DiscreteLQ::from_problem(p, steps);
  const auto ps = discrete_riccati(d);
  return x0.dot(ps.front() * x0);
}

DiscreteTrajectory discrete_trajectory(const LQProblem& p, const Vector& x0, int steps) {
  if (x0.size() != p.state_dim()) throw DomainError("discrete_trajectory: x0 has the wrong dimension");
  const auto d = DiscreteLQ::from_problem(p, steps);
  const auto ps = discrete_riccati(d);
  DiscreteTrajectory out;
  out.times = d.times;
  out.states.push_back(x0);
  for (std::size_t k = 0; k < d.stages(); ++k) {
    const Vector u = -stage_gain(d, k, ps[k + 1]) * out.states.back();
    out.states.push_back(d.A[k] * out.states.back() + d.B[k] * u);
    out.controls.push_back(u);
  }
  return out;
}

double richardson_extrapolate(double coarse, double fine) { return 2.0 * fine - coarse; }

}  // namespace lqk
