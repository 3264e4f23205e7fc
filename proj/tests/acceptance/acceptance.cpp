// Prints one PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "lqk/errors.hpp"
#include "lqk/kernel.hpp"
#include "lqk/oracle.hpp"
#include "lqk/ode.hpp"
#include "lqk/solver.hpp"
#include "lqk/verify.hpp"

namespace {

using namespace lqk;

constexpr int kSteps = 4000;
constexpr int kQuad = 2000;

struct NamedProblem {
  std::string name;
  LQProblem problem;
};

/// Worst defect/tolerance ratio over all measurements of one criterion.
class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void check(const std::string& what, double defect, double tol) {
    const double ratio = std::isfinite(defect) ? defect / tol : std::numeric_limits<double>::infinity();
    if (!(defect <= tol)) failures_.push_back(what + ": " + format(defect) + " > " + format(tol));
    if (!(ratio <= worst_ratio_) || worst_.empty()) {
      worst_ratio_ = ratio;
      worst_ = what + " " + format(defect) + " (tol " + format(tol) + ")";
    }
    ++count_;
  }

  void check_range(const std::string& what, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    if (!ok) failures_.push_back(what + ": " + format(value) + " not in [" + format(lo) + ", " + format(hi) + "]");
    ranges_ += (ranges_.empty() ? "" : ", ") + what + "=" + format(value);
    ++count_;
  }

  void error(const std::string& what, const std::exception& e) { failures_.push_back(what + ": " + e.what()); }

  bool report() const {
    const bool pass = failures_.empty() && count_ > 0;
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << id_ << "] " << title_ << ": " << count_ << " checks";
    if (!worst_.empty()) std::cout << "; worst " << worst_;
    if (!ranges_.empty()) std::cout << "; " << ranges_;
    std::cout << '\n';
    for (const auto& f : failures_) std::cout << "        " << f << '\n';
    return pass;
  }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

  int id_;
  std::string title_;
  int count_ = 0;
  double worst_ratio_ = -1.0;
  std::string worst_;
  std::string ranges_;
  std::vector<std::string> failures_;
};

std::vector<NamedProblem> problem_set() {
  std::vector<NamedProblem> out{{"P1", testing::p1()}, {"P2", testing::p2()}, {"double-integrator", testing::double_integrator()}};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) out.push_back({"random-" + std::to_string(seed), testing::random_problem(seed)});
  return out;
}

const CheckResult& find_check(const RunReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::logic_error("missing check " + name);
}

void record(Criterion& c, const std::string& problem, const RunReport& r, const std::string& check) {
  const CheckResult& res = find_check(r, check);
  if (!res.error.empty()) {
    c.error(problem + " " + check, std::runtime_error(res.error));
    return;
  }
  c.check(problem + " " + check, res.defect, res.tolerance);
}

double rk4_exp_error(int steps) {
  const auto sol = integrate_matrix_ode([](double, const Matrix& y) -> Matrix { return y; },
                                        Matrix::Constant(1, 1, 1.0), 0.0, 1.0, steps);
  return std::abs(sol.values().back()(0, 0) - std::exp(1.0));
}

}  // namespace

int main() {
  const auto started = std::chrono::steady_clock::now();
  Criterion c1(1, "Kernel diagonal inverts J: ‖J(t0q) K_d(t0q) − I‖_F at 5 query times");
  Criterion c2(2, "Riccati duality ‖J M − I‖_F at every node");
  Criterion c3(3, "Closed forms for P1 and P2");
  Criterion c4(4, "Value agreement: kernel vs feedback vs extrapolated oracle");
  Criterion c5(5, "Reproducing property on seeded random trajectories");
  Criterion c6(6, "Hermitian symmetry and Gram positivity");
  Criterion c7(7, "Adjoint identity p = −J x̄");
  Criterion c8(8, "Optimality against 100 random feasible perturbations");
  Criterion c9(9, "Multipoint representer on P1");
  Criterion c10(10, "Integrator order and oracle Richardson ratio");

  const auto problems = problem_set();
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const auto& [name, p] = problems[k];
    const Vector x0 = Vector::Ones(p.state_dim());
    try {
      VerifyOptions opts;
      opts.steps = kSteps;
      opts.quad_intervals = kQuad;
      opts.oracle_steps = 2000;
      opts.seed = 1000 + k;
      opts.x0 = x0;
      const RunReport report = run_verification(p, opts);
      record(c1, name, report, "kernel_diagonal_inverse");
      record(c2, name, report, "duality");
      record(c4, name, report, "value_agreement");
      record(c4, name, report, "oracle_agreement");
      record(c5, name, report, "reproducing_property");
      record(c6, name, report, "hermitian_symmetry");
      record(c6, name, report, "gram_psd");
      record(c7, name, report, "adjoint_identity");
    } catch (const std::exception& e) {
      c1.error(name, e);
    }

    // The diagonal again, this time from the kernel boundary value problem of
    // the restricted problem instead of its dual Riccati equation.
    try {
      KernelSettings settings;
      settings.steps = kSteps;
      const KernelOperator full(p, settings);
      const Eigen::Index n = p.state_dim();
      double worst = 0.0;
      for (int q = 0; q < 5; ++q) {
        const double tq = p.t0() + (p.t_final() - p.t0()) * q / 5.0;
        const KernelOperator sub(p.restricted(tq), settings);
        const Matrix kd = sub.section(tq).K(tq);
        worst = std::max(worst, (full.riccati().J(tq) * kd - Matrix::Identity(n, n)).norm());
      }
      c1.check(name + " via kernel BVP", worst, 1e-5);
    } catch (const std::exception& e) {
      c1.error(name + " via kernel BVP", e);
    }

    // Optimality: x̄ + δ with δ(t0) = 0 costs ‖x̄‖² + 2⟨x̄, δ⟩ + ‖δ‖².
    try {
      const KernelOperator op(p, KernelSettings{kSteps, 1e-12, false});
      const LQSolveResult opt = solve_kernel(op, x0);
      const double base = evaluate_cost(p, opt.trajectory, kQuad);
      std::mt19937_64 rng(500 + k);
      std::uniform_real_distribution<double> when(p.t0(), p.t_final());
      std::uniform_real_distribution<double> log_amp(-3.0, 0.0);
      double worst = -std::numeric_limits<double>::infinity();
      for (int draw = 0; draw < 100; ++draw) {
        std::vector<double> breaks{when(rng), when(rng), when(rng)};
        std::sort(breaks.begin(), breaks.end());
        const double amp = std::pow(10.0, log_amp(rng));
        std::vector<Vector> values;
        for (int piece = 0; piece < 4; ++piece) values.push_back(amp * testing::random_matrix(rng, p.input_dim(), 1));
        const auto delta = rollout_piecewise_control(p, Vector::Zero(p.state_dim()), breaks, values, 1000);
        const double cost =
            base + 2.0 * lq_inner_product(p, opt.trajectory, delta, kQuad) + evaluate_cost(p, delta, kQuad);
        worst = std::max(worst, base - cost);
      }
      c8.check(name + " max(cost(x̄) − cost(x̃))", std::max(worst, 0.0), 1e-7);
    } catch (const std::exception& e) {
      c8.error(name, e);
    }

    if (k >= 2) {
      try {
        const double v1 = discrete_value(p, x0, 1000);
        const double v2 = discrete_value(p, x0, 2000);
        const double v4 = discrete_value(p, x0, 4000);
        c10.check_range(name + " oracle", (v1 - v2) / (v2 - v4), 1.7, 2.3);
      } catch (const std::exception& e) {
        c10.error(name + " oracle", e);
      }
    }
  }

  // Closed forms.
  try {
    const KernelOperator op1(testing::p1()), op2(testing::p2());
    c3.check("P1 J(0)", std::abs(op1.riccati().J(0.0)(0, 0) - 0.5), 1e-6);
    c3.check("P1 V(0,1)", std::abs(solve_kernel(op1, testing::vec({1})).value - 0.5), 1e-6);
    const double pts[] = {0.0, 0.125, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0};
    double m_err = 0.0, j2_err = 0.0, k1_err = 0.0, k2_err = 0.0;
    for (double t : pts) {
      m_err = std::max(m_err, std::abs(op1.riccati().M(t)(0, 0) - (2.0 - t)));
      j2_err = std::max(j2_err, std::abs(op2.riccati().J(t)(0, 0) - 1.0));
      const auto s1 = op1.section(t);
      const auto s2 = op2.section(t);
      for (double s : pts) {
        k1_err = std::max(k1_err, std::abs(s1.K(s)(0, 0) - (2 - s) * (2 - t) / (2 - std::min(s, t))));
        k2_err = std::max(k2_err, std::abs(s2.K(s)(0, 0) - std::exp(-std::max(s, t)) * std::cosh(std::min(s, t))));
      }
    }
    c3.check("P1 M(t)=2−t", m_err, 1e-6);
    c3.check("P1 K(s,t)", k1_err, 1e-6);
    c3.check("P2 J≡1", j2_err, 1e-6);
    c3.check("P2 K(s,t)", k2_err, 1e-6);
  } catch (const std::exception& e) {
    c3.error("closed forms", e);
  }

  // Multipoint representer.
  try {
    const auto r = solve_multipoint(testing::p1(), {{0.0, testing::vec({0})}, {1.0, testing::vec({1})}}, kSteps);
    c9.check("value", std::abs(r.value - 2.0), 1e-5);
    c9.check("p_1", std::abs(r.covectors.at(0).p(0) + 1.0), 1e-5);
    c9.check("p_2", std::abs(r.covectors.at(1).p(0) - 2.0), 1e-5);
    double sup = 0.0;
    for (std::size_t i = 0; i < r.trajectory.x.size(); ++i) {
      sup = std::max(sup, std::abs(r.trajectory.x.values()[i](0, 0) - r.trajectory.x.times()[i]));
    }
    c9.check("sup|x̄(s) − s|", sup, 1e-5);
  } catch (const std::exception& e) {
    c9.error("multipoint", e);
  }

  for (int steps : {50, 100, 200}) {
    c10.check_range("rk4 " + std::to_string(steps), rk4_exp_error(steps) / rk4_exp_error(2 * steps), 14.0, 18.0);
  }

  bool all = true;
  for (const Criterion* c : {&c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8, &c9, &c10}) all = c->report() && all;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cout << (all ? "ALL PASS" : "SOME FAILED") << " (" << seconds << " s)\n";
  return all ? 0 : 1;
}
