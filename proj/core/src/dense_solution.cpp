#include "lqk/dense_solution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "lqk/errors.hpp"

namespace lqk {
namespace {

constexpr double kEvalSlack = 1e-12;

// Three-point finite-difference derivatives on a non-uniform grid.
std::vector<Matrix> fd_derivatives(const std::vector<double>& t, const std::vector<const Matrix*>& y) {
  const std::size_t n = t.size();
  std::vector<Matrix> d(n);
  if (n == 1) {
    d[0] = Matrix::Zero(y[0]->rows(), y[0]->cols());
    return d;
  }
  if (n == 2) {
    const Matrix slope = (*y[1] - *y[0]) / (t[1] - t[0]);
    d[0] = slope;
    d[1] = slope;
    return d;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0) {
      const double h1 = t[1] - t[0], h2 = t[2] - t[1];
      d[k] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * *y[0] + (h1 + h2) / (h1 * h2) * *y[1] -
             h1 / (h2 * (h1 + h2)) * *y[2];
    } else if (k == n - 1) {
      const double h1 = t[n - 2] - t[n - 3], h2 = t[n - 1] - t[n - 2];
      d[k] = h2 / (h1 * (h1 + h2)) * *y[n - 3] - (h1 + h2) / (h1 * h2) * *y[n - 2] +
             (2 * h2 + h1) / (h2 * (h1 + h2)) * *y[n - 1];
    } else {
      const double h1 = t[k] - t[k - 1], h2 = t[k + 1] - t[k];
      d[k] = -h2 / (h1 * (h1 + h2)) * *y[k - 1] + (h2 - h1) / (h1 * h2) * *y[k] +
             h1 / (h2 * (h1 + h2)) * *y[k + 1];
    }
  }
  return d;
}

}  // namespace

DenseSolution::DenseSolution(std::vector<double> times, std::vector<Matrix> values,
                             std::vector<Matrix> derivs, std::vector<Jump> jumps)
    : times_(std::move(times)),
      values_(std::move(values)),
      derivs_(std::move(derivs)),
      jumps_(std::move(jumps)) {
  if (times_.empty()) throw DomainError("DenseSolution: no nodes");
  if (values_.size() != times_.size() || derivs_.size() != times_.size()) {
    throw DomainError("DenseSolution: times, values and derivatives differ in length");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw DomainError("DenseSolution: times must be strictly increasing");
    }
    if (values_[i].rows() != values_[0].rows() || values_[i].cols() != values_[0].cols() ||
        derivs_[i].rows() != values_[0].rows() || derivs_[i].cols() != values_[0].cols()) {
      throw DomainError("DenseSolution: inconsistent sample shapes");
    }
  }
  std::sort(jumps_.begin(), jumps_.end(),
            [](const Jump& a, const Jump& b) { return a.index < b.index; });
  for (const auto& j : jumps_) {
    if (j.index >= times_.size()) throw DomainError("DenseSolution: jump index out of range");
  }
}

DenseSolution DenseSolution::from_samples(std::vector<double> times, std::vector<Matrix> values,
                                          std::vector<std::size_t> jump_nodes,
                                          std::vector<Matrix> left_values) {
  if (jump_nodes.size() != left_values.size()) {
    throw DomainError("from_samples: one left value per jump node is required");
  }
  if (times.size() != values.size() || times.empty()) {
    throw DomainError("from_samples: times and values differ in length");
  }
  std::vector<std::size_t> order(jump_nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return jump_nodes[a] < jump_nodes[b]; });

  std::vector<Matrix> derivs(times.size());
  std::vector<Jump> jumps;
  // Segment [begin, end]; when `end_left` is set, `end` is a jump node and
  // the segment sees its left value.
  auto fill_segment = [&](std::size_t begin, std::size_t end, const Matrix* end_left) {
    std::vector<double> t(times.begin() + static_cast<std::ptrdiff_t>(begin),
                          times.begin() + static_cast<std::ptrdiff_t>(end) + 1);
    std::vector<const Matrix*> y;
    for (std::size_t i = begin; i <= end; ++i) y.push_back(&values[i]);
    if (end_left) y.back() = end_left;
    auto d = fd_derivatives(t, y);
    for (std::size_t i = begin; i < end; ++i) derivs[i] = std::move(d[i - begin]);
    if (end_left) {
      jumps.push_back({end, *end_left, std::move(d.back())});
    } else {
      derivs[end] = std::move(d.back());
    }
  };
  std::size_t begin = 0;
  for (std::size_t k : order) {
    const std::size_t j = jump_nodes[k];
    if (j == 0 || j >= times.size() || j == begin) continue;
    fill_segment(begin, j, &left_values[k]);
    begin = j;
  }
  if (begin == times.size() - 1 && begin != 0) {
    // Jump at the final node: the right value has no segment of its own.
    derivs[begin] = jumps.back().deriv_left;
  } else {
    fill_segment(begin, times.size() - 1, nullptr);
  }
  return DenseSolution(std::move(times), std::move(values), std::move(derivs), std::move(jumps));
}

std::vector<double> DenseSolution::jump_times() const {
  std::vector<double> out;
  out.reserve(jumps_.size());
  for (const auto& j : jumps_) out.push_back(times_[j.index]);
  return out;
}

const DenseSolution::Jump* DenseSolution::find_jump(std::size_t i) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), i,
                             [](const Jump& j, std::size_t idx) { return j.index < idx; });
  return (it != jumps_.end() && it->index == i) ? &*it : nullptr;
}

const Matrix& DenseSolution::node_value(std::size_t i, Side side) const {
  if (side == Side::kLeft) {
    if (const Jump* j = find_jump(i)) return j->value_left;
  }
  return values_[i];
}

const Matrix& DenseSolution::node_derivative(std::size_t i, Side side) const {
  if (side == Side::kLeft) {
    if (const Jump* j = find_jump(i)) return j->deriv_left;
  }
  return derivs_[i];
}

std::size_t DenseSolution::locate(double t, bool* at_node) const {
  if (std::isnan(t)) throw DomainError("DenseSolution evaluated at NaN");
  const double slack = kEvalSlack * std::max({1.0, std::abs(front()), std::abs(back())});
  if (t < front() - slack || t > back() + slack) {
    throw DomainError("DenseSolution evaluated at t=" + std::to_string(t) + " outside [" +
                      std::to_string(front()) + ", " + std::to_string(back()) + "]");
  }
  t = std::clamp(t, front(), back());
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto idx = static_cast<std::size_t>(it - times_.begin());
  if (it != times_.end() && *it == t) {
    *at_node = true;
    return idx;
  }
  *at_node = false;
  return idx - 1;
}

Matrix DenseSolution::hermite(std::size_t i, double t, bool derivative) const {
  const double t0 = times_[i], t1 = times_[i + 1];
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const Matrix& y0 = values_[i];
  const Matrix& d0 = derivs_[i];
  const Matrix& y1 = node_value(i + 1, Side::kLeft);
  const Matrix& d1 = node_derivative(i + 1, Side::kLeft);
  const double s2 = s * s, s3 = s2 * s;
  if (!derivative) {
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y0 + (h10 * h) * d0 + h01 * y1 + (h11 * h) * d1;
  }
  const double g00 = (6 * s2 - 6 * s) / h;
  const double g10 = 3 * s2 - 4 * s + 1;
  const double g01 = (-6 * s2 + 6 * s) / h;
  const double g11 = 3 * s2 - 2 * s;
  return g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1;
}

Matrix DenseSolution::operator()(double t, Side side) const {
  bool at_node = false;
  const std::size_t i = locate(t, &at_node);
  if (at_node) return node_value(i, side);
  return hermite(i, t, false);
}

Matrix DenseSolution::derivative(double t, Side side) const {
  bool at_node = false;
  const std::size_t i = locate(t, &at_node);
  if (at_node) return node_derivative(i, side);
  return hermite(i, t, true);
}

DenseSolution sum_on_common_grid(std::span<const DenseSolution> terms) {
  if (terms.empty()) throw DomainError("sum_on_common_grid: no terms");
  const auto& grid = terms[0].times();
  for (const auto& term : terms) {
    if (term.times() != grid) throw DomainError("sum_on_common_grid: grids differ");
    if (term.rows() != terms[0].rows() || term.cols() != terms[0].cols()) {
      throw DomainError("sum_on_common_grid: shapes differ");
    }
  }
  std::vector<Matrix> values = terms[0].values();
  std::vector<Matrix> derivs = terms[0].derivatives();
  for (std::size_t k = 1; k < terms.size(); ++k) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      values[i] += terms[k].values()[i];
      derivs[i] += terms[k].derivatives()[i];
    }
  }
  std::set<std::size_t> jump_nodes;
  for (const auto& term : terms) {
    for (const auto& j : term.jumps()) jump_nodes.insert(j.index);
  }
  std::vector<DenseSolution::Jump> jumps;
  for (std::size_t i : jump_nodes) {
    Matrix v = Matrix::Zero(terms[0].rows(), terms[0].cols());
    Matrix d = v;
    for (const auto& term : terms) {
      v += term.node_value(i, Side::kLeft);
      d += term.node_derivative(i, Side::kLeft);
    }
    jumps.push_back({i, std::move(v), std::move(d)});
  }
  return DenseSolution(grid, std::move(values), std::move(derivs), std::move(jumps));
}

}  // namespace lqk
