#include "lqk/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lqk/errors.hpp"

namespace lqk {
namespace {

// Evaluation tolerance at domain endpoints, relative to the endpoint scale.
constexpr double kDomainSlack = 1e-12;

void require_shapes(const std::vector<Matrix>& mats, const char* what) {
  if (mats.empty()) throw DomainError(std::string(what) + ": no matrices given");
  for (std::size_t i = 1; i < mats.size(); ++i) {
    if (mats[i].rows() != mats[0].rows() || mats[i].cols() != mats[0].cols()) {
      throw DomainError(std::string(what) + ": matrix " + std::to_string(i) +
                        " has shape " + std::to_string(mats[i].rows()) + "x" +
                        std::to_string(mats[i].cols()) + ", expected " +
                        std::to_string(mats[0].rows()) + "x" + std::to_string(mats[0].cols()));
    }
  }
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].size() == 0) throw DomainError(std::string(what) + ": empty matrix");
    if (!mats[i].allFinite()) {
      throw DomainError(std::string(what) + ": matrix " + std::to_string(i) + " is not finite");
    }
  }
}

void require_increasing(const std::vector<double>& t, const char* what) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i])) throw DomainError(std::string(what) + ": non-finite time");
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw DomainError(std::string(what) + ": times must be strictly increasing (index " +
                        std::to_string(i) + ")");
    }
  }
}

bool same_matrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

}  // namespace

const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kPiecewiseConstant: return "pwc";
    case ScheduleKind::kSampledLinear: return "samples";
    case ScheduleKind::kPolynomial: return "poly";
  }
  return "unknown";
}

MatrixSchedule MatrixSchedule::constant(Matrix value) {
  std::vector<Matrix> payload{std::move(value)};
  require_shapes(payload, "constant schedule");
  MatrixSchedule s;
  s.kind_ = ScheduleKind::kConstant;
  s.rows_ = payload[0].rows();
  s.cols_ = payload[0].cols();
  s.payload_ = std::move(payload);
  return s;
}

MatrixSchedule MatrixSchedule::piecewise_constant(std::vector<double> breakpoints,
                                                  std::vector<Matrix> values) {
  require_shapes(values, "piecewise-constant schedule");
  require_increasing(breakpoints, "piecewise-constant schedule");
  if (values.size() != breakpoints.size() + 1) {
    throw DomainError("piecewise-constant schedule: expected " +
                      std::to_string(breakpoints.size() + 1) + " values for " +
                      std::to_string(breakpoints.size()) + " breakpoints, got " +
                      std::to_string(values.size()));
  }
  MatrixSchedule s;
  s.kind_ = ScheduleKind::kPiecewiseConstant;
  s.rows_ = values[0].rows();
  s.cols_ = values[0].cols();
  s.knots_ = std::move(breakpoints);
  s.payload_ = std::move(values);
  return s;
}

MatrixSchedule MatrixSchedule::sampled_linear(std::vector<double> times,
                                              std::vector<Matrix> samples) {
  require_shapes(samples, "sampled-linear schedule");
  require_increasing(times, "sampled-linear schedule");
  if (times.size() != samples.size()) {
    throw DomainError("sampled-linear schedule: " + std::to_string(times.size()) + " times but " +
                      std::to_string(samples.size()) + " samples");
  }
  if (times.size() < 2) throw DomainError("sampled-linear schedule: need at least two samples");
  MatrixSchedule s;
  s.kind_ = ScheduleKind::kSampledLinear;
  s.rows_ = samples[0].rows();
  s.cols_ = samples[0].cols();
  s.lo_ = times.front();
  s.hi_ = times.back();
  s.knots_ = std::move(times);
  s.payload_ = std::move(samples);
  return s;
}

MatrixSchedule MatrixSchedule::polynomial(double origin, std::vector<Matrix> coefficients) {
  require_shapes(coefficients, "polynomial schedule");
  if (!std::isfinite(origin)) throw DomainError("polynomial schedule: non-finite origin");
  MatrixSchedule s;
  s.kind_ = ScheduleKind::kPolynomial;
  s.rows_ = coefficients[0].rows();
  s.cols_ = coefficients[0].cols();
  s.origin_ = origin;
  s.payload_ = std::move(coefficients);
  return s;
}

MatrixSchedule MatrixSchedule::with_domain(double lo, double hi) const {
  if (!(lo <= hi)) throw DomainError("schedule domain must satisfy lo <= hi");
  if (lo < lo_ || hi > hi_) throw DomainError("schedule domain exceeds the available data");
  MatrixSchedule s = *this;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

bool MatrixSchedule::covers(double lo, double hi) const {
  const double slack = kDomainSlack * std::max({1.0, std::abs(lo), std::abs(hi)});
  return lo_ <= lo + slack && hi_ >= hi - slack;
}

void MatrixSchedule::check_domain(double t) const {
  if (std::isnan(t)) throw DomainError("schedule evaluated at NaN");
  const double slack = kDomainSlack * std::max(1.0, std::abs(t));
  if (t < lo_ - slack || t > hi_ + slack) {
    throw DomainError("schedule evaluated at t=" + std::to_string(t) + " outside [" +
                      std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
}

Matrix MatrixSchedule::eval(double t, bool left) const {
  check_domain(t);
  switch (kind_) {
    case ScheduleKind::kConstant:
      return payload_[0];
    case ScheduleKind::kPiecewiseConstant: {
      // Piece i covers [b_i, b_{i+1}); the left limit at b_i belongs to piece i-1.
      const auto it = left ? std::lower_bound(knots_.begin(), knots_.end(), t)
                           : std::upper_bound(knots_.begin(), knots_.end(), t);
      return payload_[static_cast<std::size_t>(it - knots_.begin())];
    }
    case ScheduleKind::kSampledLinear: {
      const double tc = std::clamp(t, knots_.front(), knots_.back());
      auto it = std::upper_bound(knots_.begin(), knots_.end(), tc);
      if (it == knots_.end()) return payload_.back();
      const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
      if (tc == knots_[i]) return payload_[i];
      const double w = (tc - knots_[i]) / (knots_[i + 1] - knots_[i]);
      return (1.0 - w) * payload_[i] + w * payload_[i + 1];
    }
    case ScheduleKind::kPolynomial: {
      const double dt = t - origin_;
      Matrix acc = payload_.back();
      for (std::size_t k = payload_.size() - 1; k-- > 0;) acc = acc * dt + payload_[k];
      return acc;
    }
  }
  return payload_[0];
}

Matrix MatrixSchedule::operator()(double t) const { return eval(t, false); }

Matrix MatrixSchedule::left_limit(double t) const { return eval(t, true); }

std::vector<double> MatrixSchedule::breakpoints(double lo, double hi) const {
  std::vector<double> out;
  for (double k : knots_) {
    if (k > lo && k < hi) out.push_back(k);
  }
  return out;
}

MatrixSchedule MatrixSchedule::negated_transpose() const {
  MatrixSchedule s = *this;
  std::swap(s.rows_, s.cols_);
  for (auto& m : s.payload_) m = (-m.transpose()).eval();
  return s;
}

bool operator==(const MatrixSchedule& a, const MatrixSchedule& b) {
  if (a.kind_ != b.kind_ || a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.knots_ != b.knots_ ||
      a.origin_ != b.origin_ || a.lo_ != b.lo_ || a.hi_ != b.hi_ ||
      a.payload_.size() != b.payload_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.payload_.size(); ++i) {
    if (!same_matrix(a.payload_[i], b.payload_[i])) return false;
  }
  return true;
}

}  // namespace lqk
