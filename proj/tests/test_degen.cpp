#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "simplexvol/degen.hpp"

using namespace simplexvol;

namespace {

constexpr double kPi = std::numbers::pi;

const GramMatrix kI3 = uniform_gram(3, 0.0);
const GramMatrix kEqui = uniform_gram(3, -0.5);
const GramMatrix kIdeal = uniform_gram(3, -1.0);

VolumeBudget budget(std::uint64_t samples) {
  VolumeBudget b;
  b.samples = samples;
  return b;
}

}  // namespace

TEST(PathTimes, GridAndRefinement) {
  const auto t = path_times(5);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
  const auto r = path_times(5, true);
  ASSERT_EQ(r.size(), 13u);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_GT(r[i], r[i - 1]);
  EXPECT_DOUBLE_EQ(r[1], 0.25 / 256);
  EXPECT_THROW(path_times(1), Error);
}

TEST(PathToOnes, EndpointsAndInitialSlope) {
  const auto p = path_to_ones(kEqui, 5);
  EXPECT_EQ(p.front().a, kEqui);
  EXPECT_TRUE(p.back().a.matrix().isApprox(kIdeal.matrix(), 1e-15));
  const double h = 1e-6;
  const auto q = path_to_ones(kEqui, 2);
  const GramMatrix step((1 - h) * kEqui.matrix() + h * kIdeal.matrix());
  EXPECT_LT((oracle::det(step.matrix()) - oracle::det(kEqui.matrix())) / h, 0.0);
  EXPECT_EQ(q.size(), 2u);
}

TEST(PathEigenShift, IdealToEquilateral) {
  const auto p = path_eigen_shift(kIdeal, 9);
  EXPECT_EQ(p.front().a, kIdeal);
  EXPECT_LT((p.back().a.matrix() - kEqui.matrix()).cwiseAbs().maxCoeff(), 1e-14);
  for (const PathPoint& pt : p) {
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(pt.a(i, i), 1.0, 1e-15);
  }
  try {
    path_eigen_shift(kI3, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoNegativeEigenvalue);
  }
  Eigen::Matrix3d two_neg;
  two_neg << 1, 2, 2, 2, 1, 2, 2, 2, 1;  // eigenvalues 5, -1, -1
  try {
    path_eigen_shift(GramMatrix(Eigen::MatrixXd(two_neg)), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MultipleNegativeEigenvalues);
  }
}

TEST(PathLinear, EndpointsMidpointAndConstant) {
  const auto p = path_linear(kI3, kEqui, 3);
  EXPECT_EQ(p.front().a, kI3);
  EXPECT_EQ(p.back().a, kEqui);
  EXPECT_EQ(p[1].a, uniform_gram(3, -0.25));
  for (const PathPoint& pt : path_linear(kEqui, kEqui, 4)) EXPECT_EQ(pt.a, kEqui);
  EXPECT_THROW(path_linear(kI3, uniform_gram(4, 0.0), 3), Error);
}

TEST(Scan, ToOnesFromEquilateral) {
  const PathScan s = scan(path_to_ones(kEqui, 5), budget(200'000), 1);
  ASSERT_EQ(s.rows.size(), 5u);
  ASSERT_TRUE(s.rows[0].vol);
  EXPECT_EQ(s.rows[0].vol->method, VolumeMethod::ExactZero);
  EXPECT_EQ(s.rows[0].vol->value, 0.0);
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    const ScanRow& r = s.rows[i];
    ASSERT_TRUE(r.vol);
    if (r.t < 1.0) {
      EXPECT_TRUE(r.flags.in_Y);
    }
    EXPECT_NEAR(r.vol->value, oracle::hyperbolic_defect(r.a.matrix()), 1e-6);
    EXPECT_GT(r.t, s.rows[i - 1].t);
  }
  EXPECT_TRUE(verify_theorem1(s));
}

TEST(Scan, ConstantPathAtIdentity) {
  const PathScan s = scan(path_linear(kI3, kI3, 4), budget(500'000), 2);
  for (const ScanRow& r : s.rows) {
    ASSERT_TRUE(r.vol);
    EXPECT_LE(std::abs(r.vol->value - kPi / 2), 3 * r.vol->std_error);
  }
  EXPECT_TRUE(verify_theorem1(s));
}

TEST(Scan, CommonRandomNumbersAcrossRows) {
  const PathScan s = scan(path_linear(kI3, kI3, 3), budget(100'000), 3);
  EXPECT_EQ(s.rows[0].vol->value, s.rows[2].vol->value);
}

TEST(Scan, RejectsNonIncreasingTimes) {
  auto p = path_linear(kI3, kEqui, 3);
  p[2].t = p[1].t;
  EXPECT_THROW(scan(p, budget(1000), 1), Error);
}

TEST(VerifyTheorem1, SphericalFamilyShrinkingToEquilateral) {
  // Angles pi/3 + delta: excess 3 delta -> 0 at the Euclidean endpoint.
  const auto gram = [](double delta) {
    const double th = kPi / 3 + delta;
    return GramMatrix(oracle::gram_from_angles(th, th, th));
  };
  const PathScan s = scan(path_linear(gram(0.3), kEqui, 6), budget(300'000), 4);
  const ScanRow& end = s.rows.back();
  EXPECT_TRUE(end.flags.in_Zbar);
  EXPECT_TRUE(verify_theorem1(s));
  const VolumeEstimate start = *s.rows.front().vol;
  EXPECT_LE(std::abs(start.value - 0.9), 3 * start.std_error);
}

TEST(VerifyTheorem1, IdealAndDegeneratePairEndpoints) {
  EXPECT_TRUE(verify_theorem1(scan(path_to_ones(kEqui, 4), budget(100'000), 5)));
  Eigen::Matrix3d pair;
  pair << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  const PathScan s = scan(path_linear(kI3, GramMatrix(Eigen::MatrixXd(pair)), 4), budget(500'000), 6);
  EXPECT_TRUE(s.rows.back().flags.in_Xbar);
  EXPECT_FALSE(s.rows.back().flags.in_Zbar);
  EXPECT_TRUE(verify_theorem1(s));
}

TEST(VerifyTheorem1, EndpointOutsideDomain) {
  Eigen::Matrix3d bad;
  bad << 1, 0.9, 0.9, 0.9, 1, -0.9, 0.9, -0.9, 1;
  const PathScan s = scan(path_linear(kI3, GramMatrix(Eigen::MatrixXd(bad)), 3), budget(1000), 7);
  try {
    verify_theorem1(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EndpointOutOfDomain);
  }
}
