#pragma once

#include <span>
#include <vector>

#include "lqk/linalg.hpp"

namespace lqk {

/// Which one-sided limit to take at a node where the solution jumps.
enum class Side { kLeft, kRight };

/// A matrix-valued function of time sampled on a strictly increasing grid,
/// interpolated by cubic Hermite polynomials built from stored derivatives.
///
/// Nodes may carry a jump: a left limit for the value and/or the derivative
/// that differs from the node's (right-continuous) data. Interpolation on
/// [t_i, t_{i+1}] uses the right data at t_i and the left data at t_{i+1}.
/// Vector-valued functions are stored as single-column matrices.
class DenseSolution {
 public:
  struct Jump {
    std::size_t index;
    Matrix value_left;
    Matrix deriv_left;
  };

  DenseSolution() = default;
  DenseSolution(std::vector<double> times, std::vector<Matrix> values, std::vector<Matrix> derivs,
                std::vector<Jump> jumps = {});

  /// Builds a solution from samples only. Derivatives are estimated with
  /// three-point finite differences on each segment between jump nodes.
  /// `jump_nodes[k]` is a node whose left value is `left_values[k]`.
  static DenseSolution from_samples(std::vector<double> times, std::vector<Matrix> values,
                                    std::vector<std::size_t> jump_nodes = {},
                                    std::vector<Matrix> left_values = {});

  bool empty() const { return times_.empty(); }
  std::size_t size() const { return times_.size(); }
  Eigen::Index rows() const { return values_.empty() ? 0 : values_[0].rows(); }
  Eigen::Index cols() const { return values_.empty() ? 0 : values_[0].cols(); }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }

  const std::vector<double>& times() const { return times_; }
  const std::vector<Matrix>& values() const { return values_; }
  const std::vector<Matrix>& derivatives() const { return derivs_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  std::vector<double> jump_times() const;

  const Matrix& node_value(std::size_t i, Side side = Side::kRight) const;
  const Matrix& node_derivative(std::size_t i, Side side = Side::kRight) const;

  /// Value at t (right limit unless `side` is kLeft). Throws DomainError
  /// when t is outside [front, back] by more than 1e-12 relative slack.
  Matrix operator()(double t, Side side = Side::kRight) const;
  Matrix derivative(double t, Side side = Side::kRight) const;

  /// Applies a linear map to every stored value and derivative.
  template <class F>
  DenseSolution map_linear(F&& f) const {
    std::vector<Matrix> v, d;
    v.reserve(size());
    d.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      v.push_back(f(values_[i]));
      d.push_back(f(derivs_[i]));
    }
    std::vector<Jump> j;
    j.reserve(jumps_.size());
    for (const auto& jump : jumps_) j.push_back({jump.index, f(jump.value_left), f(jump.deriv_left)});
    return DenseSolution(times_, std::move(v), std::move(d), std::move(j));
  }

 private:
  std::size_t locate(double t, bool* at_node) const;
  const Jump* find_jump(std::size_t i) const;
  Matrix hermite(std::size_t i, double t, bool derivative) const;

  std::vector<double> times_;
  std::vector<Matrix> values_;
  std::vector<Matrix> derivs_;
  std::vector<Jump> jumps_;  // sorted by index
};

inline Matrix dense_eval(const DenseSolution& sol, double t) { return sol(t); }

/// Sum of solutions sharing one grid. Throws DomainError if the grids differ.
DenseSolution sum_on_common_grid(std::span<const DenseSolution> terms);

}  // namespace lqk
