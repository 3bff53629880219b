#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "simplexvol/normals.hpp"

using namespace simplexvol;

namespace {

const double kS = std::sqrt(3.0) / 2.0;
const double kR = std::sqrt(2.0) / 2.0;

NormalFamily fam2(std::initializer_list<double> xs, std::initializer_list<double> ys) {
  Eigen::MatrixXd v(2, static_cast<Eigen::Index>(xs.size()));
  int j = 0;
  for (double x : xs) v(0, j++) = x;
  j = 0;
  for (double y : ys) v(1, j++) = y;
  return NormalFamily(v);
}

const NormalFamily kFrame = fam2({1, -0.5, -0.5}, {0, kS, -kS});
const NormalFamily kAntipodal = fam2({1, -1, 0}, {0, 0, 1});
const NormalFamily kRepeated = fam2({1, 1, 0}, {0, 0, 1});
const NormalFamily kHalfPlane = fam2({1, 0, kR}, {0, 1, kR});

Eigen::MatrixXd random_unit_columns(std::mt19937_64& rng, int dim, int count) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd v(dim, count);
  for (int j = 0; j < count; ++j) {
    for (int i = 0; i < dim; ++i) v(i, j) = g(rng);
    v.col(j).normalize();
  }
  return v;
}

}  // namespace

TEST(NormalFamily, RejectsNonUnitVectors) {
  EXPECT_THROW(NormalFamily(Eigen::MatrixXd::Constant(2, 3, 1.0)), Error);
  EXPECT_NO_THROW(NormalFamily::normalized(Eigen::MatrixXd::Constant(2, 3, 1.0)));
}

TEST(GramOf, CanonicalFamilies) {
  Eigen::Matrix3d equi;
  equi << 1, -0.5, -0.5, -0.5, 1, -0.5, -0.5, -0.5, 1;
  EXPECT_TRUE(gram_of(kFrame).matrix().isApprox(equi, 1e-12));
  Eigen::Matrix3d anti;
  anti << 1, -1, 0, -1, 1, 0, 0, 0, 1;
  EXPECT_TRUE(gram_of(kAntipodal).matrix().isApprox(anti, 1e-15));
  Eigen::Matrix3d rep;
  rep << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  EXPECT_TRUE(gram_of(kRepeated).matrix().isApprox(rep, 1e-15));
}

TEST(InE, CanonicalFamilies) {
  EXPECT_TRUE(in_E(kFrame));
  EXPECT_FALSE(in_E(kAntipodal));
  EXPECT_FALSE(in_E(kHalfPlane));
  try {
    in_E(fam2({1, 0}, {0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimMismatch);
  }
}

TEST(InEbar, CanonicalFamilies) {
  auto [ok, sol] = in_Ebar(kAntipodal);
  ASSERT_TRUE(ok);
  EXPECT_NEAR(sol->coeffs(0), 0.5, 1e-12);
  EXPECT_NEAR(sol->coeffs(1), 0.5, 1e-12);
  EXPECT_NEAR(sol->coeffs(2), 0.0, 1e-12);
  EXPECT_FALSE(in_Ebar(kRepeated).first);
  std::tie(ok, sol) = in_Ebar(kFrame);
  ASSERT_TRUE(ok);
  EXPECT_TRUE(sol->coeffs.isApprox(Eigen::Vector3d::Constant(1.0 / 3.0), 1e-10));
}

TEST(InEbarDual, CanonicalFamilies) {
  EXPECT_FALSE(in_Ebar_dual(kRepeated));
  EXPECT_TRUE(in_Ebar_dual(kAntipodal));
  EXPECT_TRUE(in_Ebar_dual(kFrame));
  EXPECT_FALSE(in_Ebar_dual(kHalfPlane));
}

TEST(InEbar, PrimalAndDualAgreeOnRandomFamilies) {
  std::mt19937_64 rng(41);
  int members = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + trial % 4;
    const NormalFamily f(random_unit_columns(rng, n, n + 1));
    const bool primal = in_Ebar(f).first;
    EXPECT_EQ(primal, in_Ebar_dual(f));
    members += primal;
  }
  EXPECT_GT(members, 10);
}

TEST(InE, ImpliesClosureMembership) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 3;
    const NormalFamily f(random_unit_columns(rng, n, n + 1));
    if (in_E(f)) {
      EXPECT_TRUE(in_Ebar(f).first);
    }
  }
}

TEST(PositiveKernel, MinimalSupports) {
  KernelSolution k = positive_kernel(kAntipodal);
  EXPECT_EQ(k.support, (std::vector<int>{0, 1}));
  EXPECT_NEAR(k.coeffs(0), k.coeffs(1), 1e-12);
  EXPECT_EQ(k.coeffs(2), 0.0);
  EXPECT_EQ(positive_kernel(kFrame).support, (std::vector<int>{0, 1, 2}));

  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 4);
  v.col(0) = Eigen::Vector3d(0, 0, 1);
  v.col(1) = Eigen::Vector3d(1, 0, 0);
  v.col(2) = Eigen::Vector3d(0, 1, 0);
  v.col(3) = Eigen::Vector3d(-1, 0, 0);
  EXPECT_EQ(positive_kernel(NormalFamily(v)).support.size(), 2u);
  EXPECT_THROW(positive_kernel(kRepeated), Error);
}

TEST(PositiveKernel, MatchesBruteForceOracle) {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 60; ++trial) {
    const int n = 2 + trial % 3;
    Eigen::MatrixXd v = random_unit_columns(rng, n, n + 2);
    // Plant an antipodal pair half of the time so small supports occur.
    if (trial % 2 == 0) v.col(n + 1) = -v.col(0);
    const NormalFamily f(v);
    if (!in_Ebar(f).first) continue;
    ++checked;
    const KernelSolution k = positive_kernel(f);
    EXPECT_EQ(k.support, oracle::minimal_positive_support(v)) << v;
    EXPECT_LT((v * k.coeffs).norm(), 1e-9);
    EXPECT_GE(k.coeffs.minCoeff(), 0.0);
  }
  EXPECT_GE(checked, 30);
}

TEST(VectorsFromPsdGram, CanonicalAndRoundTrip) {
  const NormalFamily id = vectors_from_psd_gram(uniform_gram(3, 0.0), 3);
  EXPECT_TRUE((id.vectors().transpose() * id.vectors()).isApprox(Eigen::Matrix3d::Identity(), 1e-12));

  const GramMatrix equi = uniform_gram(3, -0.5);
  const NormalFamily frame = vectors_from_psd_gram(equi, 2);
  EXPECT_EQ(frame.dim(), 2);
  EXPECT_TRUE(gram_of(frame).matrix().isApprox(equi.matrix(), 1e-12));

  const NormalFamily ones = vectors_from_psd_gram(GramMatrix(Eigen::MatrixXd::Ones(2, 2)), 1);
  EXPECT_NEAR(std::abs(ones.vectors()(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(ones.vectors()(0, 0), ones.vectors()(0, 1), 1e-12);

  try {
    vectors_from_psd_gram(equi, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RankTooHigh);
  }
  EXPECT_THROW(vectors_from_psd_gram(uniform_gram(3, -1.0), 3), Error);
}

TEST(VectorsFromPsdGram, RandomRoundTrip) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 3 + trial % 3;
    const GramMatrix a(oracle::random_pd_unidiagonal(rng, m));
    EXPECT_TRUE(gram_of(vectors_from_psd_gram(a, m)).matrix().isApprox(a.matrix(), 1e-10));
  }
}
