#include "lqk/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "lqk/errors.hpp"

namespace lqk {

int default_steps() {
  if (const char* env = std::getenv("LQK_DEFAULT_STEPS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 100'000'000) return static_cast<int>(v);
  }
  return kDefaultSteps;
}

std::vector<double> make_grid(double a, double b, int steps, std::span<const double> extra) {
  if (steps < 1) throw DomainError("integration needs at least one step");
  if (!std::isfinite(a) || !std::isfinite(b) || a == b) {
    throw DomainError("integration interval must be finite and non-empty");
  }
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / steps;
  grid.back() = hi;

  std::vector<double> inner;
  for (double e : extra) {
    if (e > lo && e < hi) inner.push_back(e);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());

  const double snap = 1e-6 * (hi - lo) / steps;
  for (double e : inner) {
    auto it = std::lower_bound(grid.begin(), grid.end(), e);
    // Candidates: *it (>= e) and *(it - 1) (< e).
    if (it != grid.end() && *it - e <= snap) {
      if (it != grid.begin() && it + 1 != grid.end()) *it = e;
      continue;
    }
    if (it != grid.begin() && e - *(it - 1) <= snap) {
      if (it - 1 != grid.begin()) *(it - 1) = e;
      continue;
    }
    grid.insert(it, e);
  }
  if (a > b) std::reverse(grid.begin(), grid.end());
  return grid;
}

DenseSolution integrate_matrix_ode(const MatrixRhs& rhs, const Matrix& y0, double a, double b,
                                   int steps, const IntegrateOptions& options) {
  const std::vector<double> grid = make_grid(a, b, steps, options.extra_nodes);
  const std::size_t n = grid.size();

  std::vector<double> jump_nodes(options.extra_nodes);
  std::sort(jump_nodes.begin(), jump_nodes.end());
  auto is_jump = [&](double t) { return std::binary_search(jump_nodes.begin(), jump_nodes.end(), t); };
  auto check = [&](const Matrix& y, double t) {
    if (!y.allFinite()) throw BlowUpError("non-finite state in integration", t);
  };
  check(y0, grid[0]);

  std::vector<Matrix> values(n);
  std::vector<Matrix> d_start(n - 1), d_end(n - 1);
  values[0] = y0;
  Matrix k1 = rhs(std::nextafter(grid[0], grid[1]), y0);
  check(k1, grid[0]);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double t = grid[k], tn = grid[k + 1];
    const double h = tn - t;
    const double t_hi = std::nextafter(tn, t);
    const Matrix& y = values[k];
    const Matrix k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
    const Matrix k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
    const Matrix k4 = rhs(t_hi, y + h * k3);
    Matrix next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (options.project) options.project(tn, next);
    check(next, tn);
    d_start[k] = std::move(k1);
    values[k + 1] = std::move(next);
    const bool last = k + 2 == n;
    if (last || is_jump(tn)) {
      d_end[k] = rhs(t_hi, values[k + 1]);
      check(d_end[k], tn);
    }
    if (!last) {
      k1 = rhs(std::nextafter(tn, grid[k + 2]), values[k + 1]);
      check(k1, tn);
      if (d_end[k].size() == 0) d_end[k] = k1;
    }
  }

  // Re-index in ascending time. Interval k joins grid[k] and grid[k+1];
  // d_start[k] belongs to grid[k] and d_end[k] to grid[k+1].
  std::vector<double> times(n);
  std::vector<Matrix> vals(n), derivs(n);
  std::vector<DenseSolution::Jump> jumps;
  const bool forward = b > a;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = forward ? k : n - 1 - k;
    times[k] = grid[src];
    vals[k] = std::move(values[src]);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    // Ascending interval [times[k], times[k+1]] is source interval
    // k (forward) or n - 2 - k (backward).
    const std::size_t src = forward ? k : n - 2 - k;
    Matrix& d_lower = forward ? d_start[src] : d_end[src];
    Matrix& d_upper = forward ? d_end[src] : d_start[src];
    derivs[k] = std::move(d_lower);
    if (k + 2 == n) {
      derivs[k + 1] = std::move(d_upper);
    } else if (is_jump(times[k + 1])) {
      jumps.push_back({k + 1, vals[k + 1], std::move(d_upper)});
    }
  }
  return DenseSolution(std::move(times), std::move(vals), std::move(derivs), std::move(jumps));
}

Matrix transition_matrix(const MatrixSchedule& a, double t, double s, int steps) {
  if (a.rows() != a.cols()) throw DomainError("transition_matrix: A must be square");
  const Matrix identity = Matrix::Identity(a.rows(), a.cols());
  if (t == s) return identity;
  IntegrateOptions opts;
  opts.extra_nodes = a.breakpoints(std::min(s, t), std::max(s, t));
  const auto sol = integrate_matrix_ode(
      [&a](double tau, const Matrix& z) -> Matrix { return a(tau) * z; }, identity, s, t, steps,
      opts);
  return sol(t);
}

TransitionMatrix::TransitionMatrix(const MatrixSchedule& a, double anchor, double lo, double hi,
                                   int steps)
    : anchor_(anchor) {
  if (a.rows() != a.cols()) throw DomainError("TransitionMatrix: A must be square");
  if (!(lo <= anchor && anchor <= hi && lo < hi)) {
    throw DomainError("TransitionMatrix: anchor must lie in [lo, hi]");
  }
  const Matrix identity = Matrix::Identity(a.rows(), a.cols());
  const MatrixRhs rhs = [&a](double tau, const Matrix& z) -> Matrix { return a(tau) * z; };
  IntegrateOptions opts;
  opts.extra_nodes = a.breakpoints(lo, hi);
  auto share = [&](double len) {
    return std::max(1, static_cast<int>(std::lround(steps * len / (hi - lo))));
  };
  if (anchor == lo) {
    solution_ = integrate_matrix_ode(rhs, identity, lo, hi, steps, opts);
    return;
  }
  if (anchor == hi) {
    solution_ = integrate_matrix_ode(rhs, identity, hi, lo, steps, opts);
    return;
  }
  const DenseSolution back = integrate_matrix_ode(rhs, identity, anchor, lo, share(anchor - lo), opts);
  const DenseSolution fwd = integrate_matrix_ode(rhs, identity, anchor, hi, share(hi - anchor), opts);
  std::vector<double> times(back.times());
  std::vector<Matrix> values(back.values());
  std::vector<Matrix> derivs(back.derivatives());
  std::vector<DenseSolution::Jump> jumps(back.jumps());
  const std::size_t at = times.size() - 1;
  jumps.push_back({at, values[at], derivs[at]});
  derivs[at] = fwd.derivatives()[0];
  for (std::size_t i = 1; i < fwd.size(); ++i) {
    times.push_back(fwd.times()[i]);
    values.push_back(fwd.values()[i]);
    derivs.push_back(fwd.derivatives()[i]);
  }
  for (const auto& j : fwd.jumps()) jumps.push_back({j.index + at, j.value_left, j.deriv_left});
  solution_ = DenseSolution(std::move(times), std::move(values), std::move(derivs), std::move(jumps));
}

}  // namespace lqk
