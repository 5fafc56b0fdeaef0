#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ari/linalg.hpp"
#include "test_support.hpp"

namespace ari {
namespace {

// 0 for the right half-plane, 1 for the left, 2 on the axis.
int rhp_first(Complex z) {
  if (std::abs(z.real()) <= 1e-8) return 2;
  return z.real() > 0.0 ? 0 : 1;
}

std::vector<Complex> block_eigenvalues(const OrderedSchur& s) {
  std::vector<Complex> out;
  for (const auto& b : s.blocks) {
    for (Complex z : b.eigenvalues()) out.push_back(z);
  }
  return out;
}

void expect_valid(const Mat& a, const OrderedSchur& s) {
  const Index n = a.rows();
  EXPECT_LE(max_norm(s.u.transpose() * s.u - Mat::Identity(n, n)), 1e-9);
  EXPECT_LE(max_norm(a * s.u - s.u * s.t), 1e-9 * std::max(1.0, max_norm(a)));
  // Quasi-triangular with the recorded block structure.
  for (std::size_t k = 0; k < s.blocks.size(); ++k) {
    const Index off = s.blocks[k].offset;
    const Index end = off + s.blocks[k].size;
    for (Index i = end; i < n; ++i) {
      for (Index j = off; j < end; ++j) EXPECT_EQ(s.t(i, j), 0.0);
    }
  }
  for (Index j = 0; j < n; ++j) {
    Index at = 0;
    s.u.col(j).cwiseAbs().maxCoeff(&at);
    EXPECT_GT(s.u(at, j), 0.0);
  }
}

TEST(RealSchurOrderedTest, WorkedExampleDiagonal) {
  Mat a = Mat::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, -4.0;
  const OrderedSchur s = real_schur_ordered(a, rhp_first, 1e-8);
  expect_valid(a, s);
  ASSERT_EQ(s.blocks.size(), 3u);
  EXPECT_NEAR(s.t(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(s.t(1, 1), 2.0, 1e-14);
  EXPECT_NEAR(s.t(2, 2), -4.0, 1e-14);
  EXPECT_EQ(s.blocks[0].cls, 0);
  EXPECT_EQ(s.blocks[2].cls, 1);
  EXPECT_LE(max_norm(s.u - Mat::Identity(3, 3)), 1e-14);
}

TEST(RealSchurOrderedTest, RotationIsOneBlock) {
  const double mu = 1.7;
  Mat a(2, 2);
  a << 0.0, mu, -mu, 0.0;
  const OrderedSchur s = real_schur_ordered(a, rhp_first, 1e-8);
  expect_valid(a, s);
  ASSERT_EQ(s.blocks.size(), 1u);
  EXPECT_EQ(s.blocks[0].size, 2);
  EXPECT_NEAR(s.blocks[0].lambda.real(), 0.0, 1e-14);
  EXPECT_NEAR(s.blocks[0].lambda.imag(), mu, 1e-14);
  EXPECT_EQ(s.blocks[0].cls, 2);
}

TEST(RealSchurOrderedTest, MixedSpectrumBlockOrder) {
  std::mt19937_64 rng(3);
  const std::vector<Complex> spectrum{{3, 0}, {1, 2}, {-2, 0}, {-5, 0}};
  const Mat d = testing::from_spectrum(spectrum);
  const Mat sim = testing::random_similarity(rng, 5);
  const Mat a = sim * d * sim.inverse();
  const OrderedSchur s = real_schur_ordered(a, rhp_first, 1e-8);
  expect_valid(a, s);
  ASSERT_EQ(s.blocks.size(), 4u);
  // Ascending real part within each class: 1 +- 2i, 3 | -5, -2.
  EXPECT_EQ(s.blocks[0].size, 2);
  EXPECT_EQ(s.blocks[1].size, 1);
  EXPECT_EQ(s.blocks[2].size, 1);
  EXPECT_EQ(s.blocks[3].size, 1);
  EXPECT_NEAR(std::abs(s.blocks[0].lambda - Complex(1, 2)), 0.0, 1e-9);
  EXPECT_NEAR(s.blocks[1].lambda.real(), 3.0, 1e-9);
  EXPECT_NEAR(s.blocks[2].lambda.real(), -5.0, 1e-9);
  EXPECT_NEAR(s.blocks[3].lambda.real(), -2.0, 1e-9);
  std::vector<Complex> expected{{3, 0}, {1, 2}, {1, -2}, {-2, 0}, {-5, 0}};
  EXPECT_LE(testing::spectrum_distance(expected, block_eigenvalues(s)), 1e-8);
}

TEST(RealSchurOrderedTest, TiesBrokenByImaginaryPart) {
  const std::vector<Complex> spectrum{{1, 3}, {1, 1}};
  const Mat a = testing::from_spectrum(spectrum);
  const OrderedSchur s = real_schur_ordered(a, rhp_first, 1e-8);
  ASSERT_EQ(s.blocks.size(), 2u);
  EXPECT_NEAR(s.blocks[0].lambda.imag(), 1.0, 1e-9);
  EXPECT_NEAR(s.blocks[1].lambda.imag(), 3.0, 1e-9);
}

TEST(RealSchurOrderedTest, RandomMatricesAreSimilarities) {
  std::mt19937_64 rng(29);
  for (Index n = 1; n <= 10; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const Mat a = testing::random_normal(rng, n, n);
      const OrderedSchur s = real_schur_ordered(a, rhp_first, 1e-8);
      expect_valid(a, s);
      const Eigen::VectorXcd ev = Eigen::EigenSolver<Mat>(a, false).eigenvalues();
      std::vector<Complex> expected(ev.data(), ev.data() + ev.size());
      double scale = 1.0;
      for (Complex z : expected) scale = std::max(scale, std::abs(z));
      EXPECT_LE(testing::spectrum_distance(expected, block_eigenvalues(s)),
                1e-7 * scale);
      for (std::size_t k = 1; k < s.blocks.size(); ++k) {
        EXPECT_LE(s.blocks[k - 1].cls, s.blocks[k].cls);
      }
    }
  }
}

TEST(ReorderSchurTest, MovesRequestedBlocksToFront) {
  std::mt19937_64 rng(41);
  const std::vector<Complex> spectrum{{1, 0}, {2, 1}, {-3, 0}, {4, 0}};
  const Mat d = testing::from_spectrum(spectrum);
  const Mat sim = testing::random_similarity(rng, d.rows());
  const Mat a = sim * d * sim.inverse();
  OrderedSchur s = real_schur_ordered(a, rhp_first, 1e-8);
  const std::vector<Complex> before = block_eigenvalues(s);
  const Complex third = s.blocks[2].lambda;
  const Complex first = s.blocks[0].lambda;
  const std::size_t order[] = {2, 0};
  reorder_schur(s, order);
  expect_valid(a, s);
  EXPECT_NEAR(std::abs(s.blocks[0].lambda - third), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(s.blocks[1].lambda - first), 0.0, 1e-9);
  EXPECT_LE(testing::spectrum_distance(before, block_eigenvalues(s)), 1e-9);
}

TEST(ReorderSchurTest, RejectsRepeatedIndex) {
  Mat a = Mat::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  OrderedSchur s = real_schur_ordered(a, rhp_first, 1e-8);
  const std::size_t order[] = {1, 1};
  EXPECT_THROW(reorder_schur(s, order), Error);
}

}  // namespace
}  // namespace ari
