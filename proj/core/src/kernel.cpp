#include "lqk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "lqk/errors.hpp"

namespace lqk {
namespace {

void require_in_horizon(const LQProblem& p, double t, const char* what) {
  const double slack = 1e-12 * std::max({1.0, std::abs(p.t0()), std::abs(p.t_final())});
  if (!(t >= p.t0() - slack && t <= p.t_final() + slack)) {
    throw DomainError(std::string(what) + ": time " + std::to_string(t) + " outside [t0, T]");
  }
}

double clamp_to_horizon(const LQProblem& p, double t) {
  return std::clamp(t, p.t0(), p.t_final());
}

}  // namespace

KernelOperator::KernelOperator(LQProblem problem, KernelSettings settings)
    : problem_(std::move(problem)),
      settings_(settings),
      riccati_(solve_riccati_pair(problem_, settings_.steps)),
      adjoint_transition_(problem_.A().negated_transpose(), problem_.t0(), problem_.t0(),
                          problem_.t_final(), settings_.steps) {
  const Eigen::Index n = problem_.state_dim();
  IntegrateOptions opts;
  opts.extra_nodes = problem_.breakpoints();
  closed_loop_ = integrate_matrix_ode(
      [this](double t, const Matrix& phi) -> Matrix {
        const Matrix gain = feedback_gain(problem_, riccati_.J(t), t);
        return (problem_.A()(t) + problem_.B()(t) * gain) * phi;
      },
      Matrix::Identity(n, n), problem_.t0(), problem_.t_final(), settings_.steps, opts);
  const Matrix m0 = riccati_.M.node_value(0);
  column_ = closed_loop_.map_linear([&m0](const Matrix& phi) -> Matrix { return phi * m0; });
}

Matrix KernelOperator::diagonal(double t0q) const {
  if (t0q == problem_.t0()) return riccati_.M.node_value(0);
  if (t0q == problem_.t_final()) return spd_inverse(problem_.terminal_weight());
  if (t0q > problem_.t_final()) throw DomainError("kernel diagonal: query time beyond T");
  const LQProblem sub = problem_.restricted(t0q);
  return solve_dual_riccati(sub, settings_.steps).node_value(0);
}

KernelSection KernelOperator::section(double t, std::span<const double> extra_nodes) const {
  require_in_horizon(problem_, t, "kernel section");
  t = clamp_to_horizon(problem_, t);
  const Eigen::Index n = problem_.state_dim();

  // Φ_A(t, σ)ᵀ = Φ_A(t0, σ)ᵀ Φ_A(t0, t)⁻ᵀ.
  const Matrix wt_inv_t = inverse_transition(t).partialPivLu().inverse().transpose();

  // Columns [0, 2N) carry the fundamental matrix, [2N, 3N) the particular
  // solution driven by the switching forcing.
  const MatrixRhs rhs = [&](double sigma, const Matrix& y) -> Matrix {
    const Matrix a = problem_.A()(sigma);
    const Matrix s = problem_.control_weight(sigma);
    const Matrix q = problem_.Q()(sigma);
    Matrix dy(2 * n, 3 * n);
    dy.topRows(n).noalias() = a * y.topRows(n) + s * y.bottomRows(n);
    dy.bottomRows(n).noalias() = q * y.topRows(n) - a.transpose() * y.bottomRows(n);
    Matrix forcing = adjoint_transition_(sigma);
    if (sigma >= t) forcing -= forcing * wt_inv_t;
    dy.block(0, 2 * n, n, n).noalias() += s * forcing;
    return dy;
  };

  IntegrateOptions opts;
  opts.extra_nodes = problem_.breakpoints();
  opts.extra_nodes.push_back(t);
  opts.extra_nodes.insert(opts.extra_nodes.end(), extra_nodes.begin(), extra_nodes.end());

  Matrix y0 = Matrix::Zero(2 * n, 3 * n);
  y0.leftCols(2 * n).setIdentity();
  const DenseSolution sol =
      integrate_matrix_ode(rhs, y0, problem_.t0(), problem_.t_final(), settings_.steps, opts);

  const Matrix& yt = sol.values().back();
  const Matrix psi11 = yt.block(0, 0, n, n), psi12 = yt.block(0, n, n, n);
  const Matrix psi21 = yt.block(n, 0, n, n), psi22 = yt.block(n, n, n, n);
  const Matrix k_part = yt.block(0, 2 * n, n, n), pi_part = yt.block(n, 2 * n, n, n);
  const Matrix& jt = problem_.terminal_weight();
  const Matrix wT_t = adjoint_transition_(problem_.t_final());
  const Matrix c = wT_t * wt_inv_t - wT_t;

  const Matrix lhs = jt * psi11 + psi21;
  const Matrix rhs_terminal = c + jt * psi12 + psi22 - jt * k_part - pi_part;
  Eigen::JacobiSVD<Matrix> svd(lhs);
  const auto& sv = svd.singularValues();
  const double rcond = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  if (!(rcond >= settings_.shooting_rcond)) {
    throw BvpDegeneracyError("kernel shooting system is singular (rcond " + std::to_string(rcond) +
                             ") for column time " + std::to_string(t));
  }
  const Matrix k_initial = lhs.fullPivLu().solve(rhs_terminal);

  Matrix combine(3 * n, n);
  combine << k_initial, -Matrix::Identity(n, n), Matrix::Identity(n, n);
  const DenseSolution z = sol.map_linear([&combine](const Matrix& y) -> Matrix { return y * combine; });
  KernelSection out;
  out.t = t;
  out.K = z.map_linear([n](const Matrix& m) -> Matrix { return m.topRows(n); });
  out.Pi = z.map_linear([n](const Matrix& m) -> Matrix { return m.bottomRows(n); });
  out.shooting_rcond = rcond;
  return out;
}

Matrix KernelOperator::entry(double s, double t) const {
  require_in_horizon(problem_, s, "kernel entry");
  return section(t).K(clamp_to_horizon(problem_, s));
}

GramResult KernelOperator::gram(std::span<const double> times) const {
  if (times.empty()) throw DomainError("gram: no times given");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require_in_horizon(problem_, times[i], "gram");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("gram: times must be increasing");
  }
  const std::size_t k = times.size();
  GramResult out;
  out.sections.resize(k);
  if (settings_.parallel && k > 1) {
    std::vector<std::future<KernelSection>> jobs;
    jobs.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      jobs.push_back(std::async(std::launch::async, [this, &times, j] { return section(times[j], times); }));
    }
    for (std::size_t j = 0; j < k; ++j) out.sections[j] = jobs[j].get();
  } else {
    for (std::size_t j = 0; j < k; ++j) out.sections[j] = section(times[j], times);
  }

  const Eigen::Index n = problem_.state_dim();
  const auto kn = static_cast<Eigen::Index>(k) * n;
  Matrix gram(kn, kn);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      gram.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) =
          out.sections[j].K(clamp_to_horizon(problem_, times[i]));
    }
  }
  out.asymmetry = asymmetry(gram);
  out.gram = symmetrize(gram);
  return out;
}

ControlledTrajectory KernelOperator::section_trajectory(const KernelSection& section,
                                                        const Vector& p) const {
  if (p.size() != problem_.state_dim()) throw DomainError("kernel section: covector has wrong size");
  DenseSolution x = section.K.map_linear([&p](const Matrix& k) -> Matrix { return k * p; });
  DenseSolution u = recover_control(problem_, x);
  return {std::move(x), std::move(u)};
}

double KernelOperator::reproducing_residual(const ControlledTrajectory& traj, double t,
                                            const Vector& p, int quad_intervals) const {
  require_in_horizon(problem_, t, "reproducing residual");
  if (p.size() != problem_.state_dim()) throw DomainError("reproducing residual: wrong covector size");
  t = clamp_to_horizon(problem_, t);
  const double evaluation = p.dot(traj.x(t).col(0));
  if (p.isZero(0.0)) return std::abs(evaluation);
  const ControlledTrajectory k_traj = section_trajectory(section(t), p);
  return std::abs(evaluation - lq_inner_product(problem_, traj, k_traj, quad_intervals));
}

double lq_inner_product(const LQProblem& p, const ControlledTrajectory& a,
                        const ControlledTrajectory& b, int quad_intervals) {
  const double slack = 1e-9 * std::max({1.0, std::abs(p.t0()), std::abs(p.t_final())});
  for (const DenseSolution* s : {&a.x, &a.u, &b.x, &b.u}) {
    if (s->empty() || std::abs(s->front() - p.t0()) > slack ||
        std::abs(s->back() - p.t_final()) > slack) {
      throw DomainError("inner product: trajectory horizon does not match [t0, T]");
    }
  }
  if (a.x.rows() != p.state_dim() || b.x.rows() != p.state_dim() ||
      a.u.rows() != p.input_dim() || b.u.rows() != p.input_dim()) {
    throw DomainError("inner product: trajectory dimensions do not match the problem");
  }

  std::vector<double> extra = p.breakpoints();
  for (const DenseSolution* s : {&a.x, &a.u, &b.x, &b.u}) {
    const auto jt = s->jump_times();
    extra.insert(extra.end(), jt.begin(), jt.end());
  }
  const std::vector<double> grid = make_grid(p.t0(), p.t_final(), quad_intervals, extra);

  auto integrand = [&](double t, Side side) {
    const bool left = side == Side::kLeft;
    const Matrix q = left ? p.Q().left_limit(t) : p.Q()(t);
    const Matrix r = left ? p.R().left_limit(t) : p.R()(t);
    const Vector x1 = a.x(t, side).col(0), x2 = b.x(t, side).col(0);
    const Vector u1 = a.u(t, side).col(0), u2 = b.u(t, side).col(0);
    return x1.dot(q * x2) + u1.dot(r * u2);
  };
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double lo = grid[k], hi = grid[k + 1];
    const double mid = 0.5 * (lo + hi);
    integral += (hi - lo) / 6.0 *
                (integrand(lo, Side::kRight) + 4.0 * integrand(mid, Side::kRight) +
                 integrand(hi, Side::kLeft));
  }
  const Vector x1T = a.x(p.t_final(), Side::kLeft).col(0);
  const Vector x2T = b.x(p.t_final(), Side::kLeft).col(0);
  return x1T.dot(p.terminal_weight() * x2T) + integral;
}

Matrix kernel_diagonal(const LQProblem& p, double t0q, int steps) {
  if (t0q == p.t_final()) return spd_inverse(p.terminal_weight());
  if (t0q > p.t_final()) throw DomainError("kernel diagonal: query time beyond T");
  const LQProblem sub = t0q == p.t0() ? p : p.restricted(t0q);
  return solve_dual_riccati(sub, steps).node_value(0);
}

DenseSolution kernel_column(const LQProblem& p, int steps) {
  KernelSettings settings;
  settings.steps = steps;
  return KernelOperator(p, settings).column();
}

Matrix kernel_full(const LQProblem& p, double s, double t, int steps) {
  KernelSettings settings;
  settings.steps = steps;
  return KernelOperator(p, settings).entry(s, t);
}

GramResult gram_matrix(const LQProblem& p, std::span<const double> times, int steps) {
  KernelSettings settings;
  settings.steps = steps;
  return KernelOperator(p, settings).gram(times);
}

double reproducing_residual(const LQProblem& p, const ControlledTrajectory& traj, double t,
                            const Vector& pvec, int steps, int quad_intervals) {
  KernelSettings settings;
  settings.steps = steps;
  return KernelOperator(p, settings).reproducing_residual(traj, t, pvec, quad_intervals);
}

}  // namespace lqk
