#pragma once

#include <limits>
#include <vector>

#include "lqk/linalg.hpp"

namespace lqk {

enum class ScheduleKind { kConstant, kPiecewiseConstant, kSampledLinear, kPolynomial };

const char* to_string(ScheduleKind kind);

/// A time-varying matrix coefficient such as A(t), B(t), Q(t) or R(t).
///
/// Four representations are supported:
///  - constant: a single matrix;
///  - piecewise-constant: interior breakpoints b_1 < ... < b_k and k+1
///    values, right-continuous at every breakpoint;
///  - sampled-linear: samples (t_i, M_i), linearly interpolated in between,
///    domain [t_first, t_last];
///  - polynomial: sum_k C_k (t - origin)^k.
///
/// Constant, piecewise-constant and polynomial schedules are defined on the
/// whole real line unless restricted with `with_domain`.
///
/// Instances are immutable after construction.
class MatrixSchedule {
 public:
  static MatrixSchedule constant(Matrix value);
  static MatrixSchedule piecewise_constant(std::vector<double> breakpoints,
                                           std::vector<Matrix> values);
  static MatrixSchedule sampled_linear(std::vector<double> times, std::vector<Matrix> samples);
  static MatrixSchedule polynomial(double origin, std::vector<Matrix> coefficients);

  /// Copy restricted to [lo, hi]; throws DomainError if that exceeds the
  /// natural domain (sampled-linear).
  MatrixSchedule with_domain(double lo, double hi) const;

  ScheduleKind kind() const { return kind_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  double domain_begin() const { return lo_; }
  double domain_end() const { return hi_; }
  bool covers(double lo, double hi) const;

  /// Breakpoints (piecewise-constant) or sample times (sampled-linear);
  /// empty for the other kinds.
  const std::vector<double>& knots() const { return knots_; }
  /// Values, samples or polynomial coefficients, depending on the kind.
  const std::vector<Matrix>& payload() const { return payload_; }
  double origin() const { return origin_; }

  /// Value at t. Right-continuous at piecewise-constant breakpoints.
  Matrix operator()(double t) const;
  /// Left limit at t; differs from operator() only at piecewise-constant
  /// breakpoints.
  Matrix left_limit(double t) const;

  /// Knots strictly inside (lo, hi): points where the schedule or its
  /// derivative may jump.
  std::vector<double> breakpoints(double lo, double hi) const;

  /// Schedule of t -> -M(t)ᵀ, same kind and knots.
  MatrixSchedule negated_transpose() const;

  friend bool operator==(const MatrixSchedule& a, const MatrixSchedule& b);

 private:
  MatrixSchedule() = default;
  void check_domain(double t) const;
  Matrix eval(double t, bool left) const;

  ScheduleKind kind_ = ScheduleKind::kConstant;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<double> knots_;
  std::vector<Matrix> payload_;
  double origin_ = 0.0;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
};

inline Matrix eval_schedule(const MatrixSchedule& s, double t) { return s(t); }

}  // namespace lqk
