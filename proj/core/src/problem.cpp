#include "lqk/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lqk/errors.hpp"

namespace lqk {
namespace {

void require_shape(const MatrixSchedule& s, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (s.rows() != rows || s.cols() != cols) {
    throw DomainError(std::string(name) + " must be " + std::to_string(rows) + "x" +
                      std::to_string(cols) + ", got " + std::to_string(s.rows()) + "x" +
                      std::to_string(s.cols()));
  }
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

LQProblem::LQProblem(double t0, double t_final, MatrixSchedule a, MatrixSchedule b,
                     MatrixSchedule q, MatrixSchedule r, Matrix terminal_weight)
    : t0_(t0),
      t_final_(t_final),
      a_(std::move(a)),
      b_(std::move(b)),
      q_(std::move(q)),
      r_(std::move(r)),
      terminal_weight_(std::move(terminal_weight)) {
  if (!std::isfinite(t0_) || !std::isfinite(t_final_) || !(t0_ < t_final_)) {
    throw DomainError("LQProblem: need finite t0 < T");
  }
  const Eigen::Index n = a_.rows();
  const Eigen::Index m = b_.cols();
  require_shape(a_, n, n, "A");
  require_shape(b_, n, m, "B");
  require_shape(q_, n, n, "Q");
  require_shape(r_, m, m, "R");
  if (terminal_weight_.rows() != n || terminal_weight_.cols() != n) {
    throw DomainError("J_T must be " + std::to_string(n) + "x" + std::to_string(n));
  }
}

std::vector<double> LQProblem::breakpoints() const {
  std::vector<double> out;
  for (const MatrixSchedule* s : {&a_, &b_, &q_, &r_}) {
    const auto bp = s->breakpoints(t0_, t_final_);
    out.insert(out.end(), bp.begin(), bp.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Matrix LQProblem::control_weight(double t) const {
  const Matrix b = b_(t);
  return symmetrize(b * SpdFactor(r_(t), 0.0).solve(b.transpose()));
}

LQProblem LQProblem::restricted(double new_t0) const {
  if (!(new_t0 < t_final_)) throw DomainError("restricted: new initial time must precede T");
  return LQProblem(new_t0, t_final_, a_, b_, q_, r_, terminal_weight_);
}

bool operator==(const LQProblem& a, const LQProblem& b) {
  return a.t0_ == b.t0_ && a.t_final_ == b.t_final_ && a.a_ == b.a_ && a.b_ == b.b_ &&
         a.q_ == b.q_ && a.r_ == b.r_ &&
         a.terminal_weight_.rows() == b.terminal_weight_.rows() &&
         a.terminal_weight_.cols() == b.terminal_weight_.cols() &&
         a.terminal_weight_ == b.terminal_weight_;
}

std::string ValidationReport::summary() const {
  if (valid()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) os << "; ";
    os << v.assumption;
    if (!std::isnan(v.time)) os << " at t=" << v.time;
    os << " (value " << v.value << ")";
  }
  return os.str();
}

ValidationReport validate_problem(const LQProblem& p, int grid_points,
                                  const AssumptionTolerances& tol) {
  ValidationReport report;
  auto add = [&](std::string what, double t, double value) {
    report.violations.push_back({std::move(what), t, value});
  };

  const Matrix& jt = p.terminal_weight();
  if (!jt.allFinite()) {
    add("J_T not finite", kNaN, kNaN);
  } else {
    if (asymmetry(jt) > tol.sym_tol * std::max(1.0, jt.norm())) {
      add("J_T not symmetric", kNaN, asymmetry(jt));
    }
    const double lmin = min_eigenvalue(jt);
    if (!(lmin > tol.pd_tol)) add("J_T not positive definite", kNaN, lmin);
  }

  struct Named {
    const MatrixSchedule* s;
    const char* name;
  };
  bool covered = true;
  for (Named n : {Named{&p.A(), "A"}, Named{&p.B(), "B"}, Named{&p.Q(), "Q"}, Named{&p.R(), "R"}}) {
    if (!n.s->covers(p.t0(), p.t_final())) {
      add(std::string(n.name) + " schedule does not cover the horizon", kNaN, n.s->domain_end());
      covered = false;
    }
  }
  // The grid checks below would throw on evaluation outside a domain.
  if (!covered) return report;

  const int n_points = std::max(grid_points, 2);
  // Report only the worst offender per assumption to keep the report short.
  Violation worst_r{"", kNaN, std::numeric_limits<double>::infinity()};
  Violation worst_q{"", kNaN, std::numeric_limits<double>::infinity()};
  bool r_asym = false, q_asym = false;
  for (int i = 0; i < n_points; ++i) {
    const double t = p.t0() + (p.t_final() - p.t0()) * i / (n_points - 1);
    const Matrix r = p.R()(t);
    const Matrix q = p.Q()(t);
    if (!r_asym && asymmetry(r) > tol.sym_tol * std::max(1.0, r.norm())) {
      add("R not symmetric", t, asymmetry(r));
      r_asym = true;
    }
    if (!q_asym && asymmetry(q) > tol.sym_tol * std::max(1.0, q.norm())) {
      add("Q not symmetric", t, asymmetry(q));
      q_asym = true;
    }
    const double rmin = min_eigenvalue(r);
    if (rmin < tol.r_min && rmin < worst_r.value) worst_r = {"R not uniformly positive definite", t, rmin};
    const double qmin = min_eigenvalue(q);
    if (qmin < -tol.psd_tol && qmin < worst_q.value) worst_q = {"Q not positive semi-definite", t, qmin};
    for (const MatrixSchedule* s : {&p.A(), &p.B()}) {
      if (!(*s)(t).allFinite()) add("coefficient not finite", t, kNaN);
    }
  }
  if (!worst_r.assumption.empty()) report.violations.push_back(worst_r);
  if (!worst_q.assumption.empty()) report.violations.push_back(worst_q);
  return report;
}

}  // namespace lqk
