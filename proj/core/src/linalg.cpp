#include "lqk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lqk/errors.hpp"

namespace lqk {
namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DomainError(std::string(what) + ": matrix must be square, got " +
                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_symmetric(const Matrix& a, const char* what) {
  require_square(a, what);
  const double scale = std::max(1.0, a.norm());
  if (asymmetry(a) > 1e-8 * scale) {
    throw DomainError(std::string(what) + ": matrix is not symmetric");
  }
}

}  // namespace

SpdFactor::SpdFactor(const Matrix& a, double pd_tol) {
  require_symmetric(a, "SpdFactor");
  matrix_ = symmetrize(a);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(matrix_);
  if (eig.info() != Eigen::Success) {
    throw SingularityError("SpdFactor: eigendecomposition failed",
                           std::numeric_limits<double>::quiet_NaN());
  }
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
  if (eigenvalues_.size() == 0) throw DomainError("SpdFactor: empty matrix");
  if (!(eigenvalues_(0) > pd_tol)) {
    throw SingularityError("matrix is not positive definite", eigenvalues_(0));
  }
}

Matrix SpdFactor::inverse() const {
  const Vector inv = eigenvalues_.cwiseInverse();
  return symmetrize(eigenvectors_ * inv.asDiagonal() * eigenvectors_.transpose());
}

Matrix SpdFactor::sqrt() const {
  const Vector s = eigenvalues_.cwiseSqrt();
  return symmetrize(eigenvectors_ * s.asDiagonal() * eigenvectors_.transpose());
}

Matrix SpdFactor::inverse_sqrt() const {
  const Vector s = eigenvalues_.cwiseSqrt().cwiseInverse();
  return symmetrize(eigenvectors_ * s.asDiagonal() * eigenvectors_.transpose());
}

Matrix SpdFactor::solve(const Matrix& rhs) const {
  const Vector inv = eigenvalues_.cwiseInverse();
  return eigenvectors_ * (inv.asDiagonal() * (eigenvectors_.transpose() * rhs));
}

double SpdFactor::reconstruction_error() const {
  return (eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose() - matrix_).norm();
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double asymmetry(const Matrix& a) { return (a - a.transpose()).norm(); }

double min_eigenvalue(const Matrix& a) {
  require_square(a, "min_eigenvalue");
  if (a.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(a), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Matrix spd_inverse(const Matrix& a, double pd_tol) { return SpdFactor(a, pd_tol).inverse(); }

Matrix pinv_svd(const Matrix& a, double rank_tol) {
  Matrix result = Matrix::Zero(a.cols(), a.rows());
  if (a.size() == 0) return result;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = rank_tol * s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) {
      result.noalias() += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).transpose();
    }
  }
  return result;
}

Matrix weighted_pinv_b(const Matrix& b, const Matrix& r, double rank_tol) {
  if (r.rows() != b.cols()) {
    throw DomainError("weighted_pinv_b: R must be " + std::to_string(b.cols()) + "x" +
                      std::to_string(b.cols()));
  }
  const Matrix r_inv_sqrt = SpdFactor(r).inverse_sqrt();
  return r_inv_sqrt * pinv_svd(b * r_inv_sqrt, rank_tol);
}

Matrix sym_pinv_clipped(const Matrix& a, double rel_clip) {
  require_symmetric(a, "sym_pinv_clipped");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(a));
  const Vector& lambda = eig.eigenvalues();
  Matrix result = Matrix::Zero(a.rows(), a.cols());
  if (lambda.size() == 0) return result;
  const double cutoff = rel_clip * std::max(0.0, lambda(lambda.size() - 1));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff && lambda(i) > 0.0) {
      const auto v = eig.eigenvectors().col(i);
      result.noalias() += v * (1.0 / lambda(i)) * v.transpose();
    }
  }
  return symmetrize(result);
}

}  // namespace lqk
