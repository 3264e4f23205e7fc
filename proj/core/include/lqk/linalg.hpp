#pragma once

#include <Eigen/Dense>

namespace lqk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultPdTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-12;

/// Spectral factorization of a symmetric positive definite matrix.
///
/// The eigenbasis is computed once and reused for the inverse, the inverse
/// square root and linear solves. Construction throws SingularityError when
/// the smallest eigenvalue does not exceed `pd_tol`.
class SpdFactor {
 public:
  explicit SpdFactor(const Matrix& a, double pd_tol = kDefaultPdTol);

  const Matrix& matrix() const { return matrix_; }
  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double min_eigenvalue() const { return eigenvalues_(0); }
  double max_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }

  Matrix inverse() const;
  Matrix sqrt() const;
  Matrix inverse_sqrt() const;
  Matrix solve(const Matrix& rhs) const;
  double reconstruction_error() const;

 private:
  Matrix matrix_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

/// (A + Aᵀ) / 2.
Matrix symmetrize(const Matrix& a);

/// ‖A − Aᵀ‖_F.
double asymmetry(const Matrix& a);

/// Smallest eigenvalue of the symmetric part of `a`.
double min_eigenvalue(const Matrix& a);

/// 2-norm condition number from the singular values.
double condition_number(const Matrix& a);

/// Inverse of a symmetric positive definite matrix, explicitly symmetrized.
/// Throws SingularityError when the smallest eigenvalue is <= pd_tol and
/// DomainError when `a` is not square or visibly asymmetric.
Matrix spd_inverse(const Matrix& a, double pd_tol = kDefaultPdTol);

/// Moore-Penrose pseudoinverse. Singular values <= rank_tol * sigma_max are
/// treated as zero.
Matrix pinv_svd(const Matrix& a, double rank_tol = kDefaultRankTol);

/// Minimal R-norm pseudoinverse of B: R^{-1/2} pinv(B R^{-1/2}).
///
/// For v in range(B), u = result * v solves B u = v with the least uᵀRu.
Matrix weighted_pinv_b(const Matrix& b, const Matrix& r, double rank_tol = kDefaultRankTol);

/// Pseudoinverse of a symmetric positive semi-definite matrix through its
/// eigendecomposition; eigenvalues <= rel_clip * lambda_max are dropped.
Matrix sym_pinv_clipped(const Matrix& a, double rel_clip);

}  // namespace lqk
