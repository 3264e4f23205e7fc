#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "lqk/errors.hpp"
#include "lqk/linalg.hpp"

namespace lqk {
namespace {

using testing::mat;

TEST(SpdInverse, Diagonal) {
  const Matrix inv = spd_inverse(mat({{2, 0}, {0, 4}}));
  EXPECT_TRUE(inv.isApprox(mat({{0.5, 0}, {0, 0.25}}), 1e-15));
}

TEST(SpdInverse, Identity) {
  EXPECT_TRUE(spd_inverse(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-15));
}

TEST(SpdInverse, CoupledTwoByTwo) {
  const Matrix a = mat({{2, 1}, {1, 1}});
  const Matrix inv = spd_inverse(a);
  EXPECT_LE((inv - mat({{1, -1}, {-1, 2}})).norm(), 1e-14);
  EXPECT_EQ(inv, inv.transpose());
  EXPECT_LE((a * inv - Matrix::Identity(2, 2)).norm(), 1e-10 * condition_number(a));
}

TEST(SpdInverse, RejectsIndefiniteWithEigenvalue) {
  try {
    spd_inverse(mat({{1, 0}, {0, -2}}));
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_DOUBLE_EQ(e.min_eigenvalue(), -2.0);
  }
  EXPECT_THROW(spd_inverse(Matrix::Zero(2, 2)), SingularityError);
}

TEST(SpdFactor, ReconstructionAndRoots) {
  std::mt19937_64 rng(7);
  const Matrix a = testing::random_spd(rng, 4, 0.3);
  const SpdFactor f(a);
  EXPECT_LE(f.reconstruction_error(), 1e-12 * a.norm());
  EXPECT_LE((f.sqrt() * f.sqrt() - a).norm(), 1e-12 * a.norm());
  EXPECT_LE((f.inverse_sqrt() * a * f.inverse_sqrt() - Matrix::Identity(4, 4)).norm(), 1e-11);
}

TEST(PinvSvd, RankDeficientDiagonal) {
  EXPECT_TRUE(pinv_svd(mat({{2, 0}, {0, 0}})).isApprox(mat({{0.5, 0}, {0, 0}}), 1e-15));
}

TEST(PinvSvd, InvertibleMatchesInverse) {
  const Matrix a = mat({{3, 1, 0}, {1, 2, 1}, {0, 1, 4}});
  EXPECT_LE((pinv_svd(a) - a.inverse()).norm(), 1e-10 * a.inverse().norm());
}

TEST(PinvSvd, ColumnVector) {
  const Matrix a = mat({{1}, {0}});
  const Matrix p = pinv_svd(a);
  ASSERT_EQ(p.rows(), 1);
  ASSERT_EQ(p.cols(), 2);
  EXPECT_TRUE(p.isApprox(mat({{1, 0}}), 1e-15));
}

TEST(PinvSvd, ZeroMatrixGivesZero) {
  const Matrix p = pinv_svd(Matrix::Zero(2, 3));
  EXPECT_EQ(p.rows(), 3);
  EXPECT_TRUE(p.isZero(0.0));
}

TEST(PinvSvd, PenroseIdentitiesOnRandomRankDeficient) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = testing::random_matrix(rng, 5, 2) * testing::random_matrix(rng, 2, 4);
    const Matrix p = pinv_svd(a);
    const double s = a.norm() * p.norm();
    EXPECT_LE((a * p * a - a).norm(), 1e-10 * a.norm() * s);
    EXPECT_LE((p * a * p - p).norm(), 1e-10 * p.norm() * s);
    EXPECT_LE(asymmetry(a * p), 1e-10 * s);
    EXPECT_LE(asymmetry(p * a), 1e-10 * s);
  }
}

TEST(WeightedPinv, InjectiveBIgnoresR) {
  const Matrix bw = weighted_pinv_b(mat({{1}, {0}}), mat({{2}}));
  EXPECT_NEAR((bw * testing::vec({1, 0}))(0), 1.0, 1e-14);
}

TEST(WeightedPinv, MinimalRNorm) {
  const Matrix bw = weighted_pinv_b(mat({{1, 1}}), mat({{1, 0}, {0, 4}}));
  const Vector u = bw * testing::vec({1});
  EXPECT_NEAR(u(0), 0.8, 1e-14);
  EXPECT_NEAR(u(1), 0.2, 1e-14);
  EXPECT_NEAR(u.dot(mat({{1, 0}, {0, 4}}) * u), 0.8, 1e-14);
}

TEST(WeightedPinv, ZeroB) {
  EXPECT_TRUE(weighted_pinv_b(Matrix::Zero(3, 2), Matrix::Identity(2, 2)).isZero(0.0));
}

TEST(WeightedPinv, IdentityWeightMatchesPinv) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix b = testing::random_matrix(rng, 4, 3);
    EXPECT_LE((weighted_pinv_b(b, Matrix::Identity(3, 3)) - pinv_svd(b)).norm(), 1e-12 * pinv_svd(b).norm());
  }
}

TEST(WeightedPinv, RejectsNonPdWeight) {
  EXPECT_THROW(weighted_pinv_b(mat({{1}}), mat({{0}})), SingularityError);
}

// Any preimage w of Bw costs at least as much as the weighted pseudoinverse's.
TEST(WeightedPinv, MinimalNormPropertyOverRandomDraws) {
  std::mt19937_64 rng(2024);
  for (int draw = 0; draw < 120; ++draw) {
    const auto n = static_cast<Eigen::Index>(1 + rng() % 5);
    const auto m = static_cast<Eigen::Index>(1 + rng() % 5);
    const Matrix b = testing::random_matrix(rng, n, m);
    const Matrix r = testing::random_spd(rng, m, 0.1);
    const Vector w = testing::random_matrix(rng, m, 1);
    const Vector u = weighted_pinv_b(b, r) * (b * w);
    EXPECT_LE(u.dot(r * u), w.dot(r * w) + 1e-10) << "draw " << draw;
    EXPECT_LE((b * u - b * w).norm(), 1e-10 * (1.0 + (b * w).norm())) << "draw " << draw;
  }
}

TEST(SymPinvClipped, ClipsTinyEigenvalues) {
  const Matrix a = mat({{1, 0}, {0, 1e-14}});
  const Matrix p = sym_pinv_clipped(a, 1e-10);
  EXPECT_NEAR(p(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(p(1, 1), 0.0, 1e-12);
}

}  // namespace
}  // namespace lqk
