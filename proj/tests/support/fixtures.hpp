#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "lqk/problem.hpp"
#include "lqk/trajectory.hpp"

namespace lqk::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

/// A=0, B=1, Q=0, R=1, J_T=1 on [0, 1].
inline LQProblem p1(double q = 0.0, double r = 1.0, double jt = 1.0) {
  return LQProblem(0.0, 1.0, MatrixSchedule::constant(scalar(0.0)), MatrixSchedule::constant(scalar(1.0)),
                   MatrixSchedule::constant(scalar(q)), MatrixSchedule::constant(scalar(r)), scalar(jt));
}

/// P1 with Q=1.
inline LQProblem p2() { return p1(1.0); }

inline LQProblem double_integrator() {
  return LQProblem(0.0, 1.0, MatrixSchedule::constant(mat({{0, 1}, {0, 0}})),
                   MatrixSchedule::constant(mat({{0}, {1}})), MatrixSchedule::constant(Matrix::Identity(2, 2)),
                   MatrixSchedule::constant(scalar(1.0)), Matrix::Identity(2, 2));
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = dist(rng);
  }
  return m;
}

/// G Gᵀ / n + floor I.
inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n, double floor) {
  const Matrix g = random_matrix(rng, n, n);
  return g * g.transpose() / static_cast<double>(n) + floor * Matrix::Identity(n, n);
}

/// Random problem with N <= 4 on [0, T], T in {1, 1.5, 2}, mixing all four
/// schedule kinds: A polynomial, B piecewise-constant with dyadic breakpoints,
/// Q sampled-linear (PSD samples), R piecewise-constant or constant.
inline LQProblem random_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 4);
  const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n));
  const double horizons[] = {1.0, 1.5, 2.0};
  const double tf = horizons[rng() % 3];

  const MatrixSchedule a = MatrixSchedule::polynomial(
      0.0, {random_matrix(rng, n, n, 0.5), random_matrix(rng, n, n, 0.3)});

  const std::vector<double> b_breaks{tf / 4.0, tf / 2.0};
  std::vector<Matrix> b_values;
  for (int k = 0; k < 3; ++k) b_values.push_back(random_matrix(rng, n, m) + Matrix::Identity(n, m));
  const MatrixSchedule b = MatrixSchedule::piecewise_constant(b_breaks, std::move(b_values));

  std::vector<double> q_times{0.0, tf / 2.0, tf};
  std::vector<Matrix> q_samples;
  for (int k = 0; k < 3; ++k) {
    const Matrix g = random_matrix(rng, n, n);
    q_samples.push_back(g * g.transpose() / static_cast<double>(n));
  }
  const MatrixSchedule q = MatrixSchedule::sampled_linear(std::move(q_times), std::move(q_samples));

  const bool r_switches = rng() % 2 == 0;
  const MatrixSchedule r = r_switches
                               ? MatrixSchedule::piecewise_constant({3.0 * tf / 4.0},
                                                                    {random_spd(rng, m, 0.5), random_spd(rng, m, 0.5)})
                               : MatrixSchedule::constant(random_spd(rng, m, 0.5));
  const Matrix jt = random_spd(rng, n, 0.2);
  return LQProblem(0.0, tf, a, b, q, r, jt);
}

using ScalarFn = std::function<double(double)>;

/// Samples a scalar function and its derivative on n uniform intervals.
inline DenseSolution sample(const ScalarFn& f, const ScalarFn& df, int n, double a = 0.0, double b = 1.0) {
  std::vector<double> t;
  std::vector<Matrix> v, d;
  for (int i = 0; i <= n; ++i) {
    const double s = a + (b - a) * i / n;
    t.push_back(s);
    v.push_back(scalar(f(s)));
    d.push_back(scalar(df(s)));
  }
  return DenseSolution(t, v, d);
}

/// Scalar controlled trajectory from closed forms for x, x', u, u'.
inline ControlledTrajectory scalar_trajectory(const ScalarFn& x, const ScalarFn& dx, const ScalarFn& u,
                                              const ScalarFn& du, int n = 400) {
  return {sample(x, dx, n), sample(u, du, n)};
}

inline std::string problem_dir() { return LQK_TEST_DATA_DIR; }

}  // namespace lqk::testing
