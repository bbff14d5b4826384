#include "c2a2/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <gtest/gtest.h>

#include "c2a2/error.h"
#include "test_util.h"

namespace c2a2 {
namespace {

using B = BasicEmotion;

Eigen::MatrixXd Gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = z(gen);
  }
  return x;
}

Eigen::MatrixXd RandomSpd(int d, std::uint64_t seed) {
  const Eigen::MatrixXd a = Gaussian(d, d, seed);
  return a * a.transpose() / d + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

FeatureStats Stats(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  return {std::move(mean), std::move(cov), 100};
}

class ConstantOracle : public ClassifierOracle {
 public:
  explicit ConstantOracle(ClassProbs p) : p_(p) {}
  ClassProbs Classify(const C2A2Point&) const override { return p_; }

 private:
  ClassProbs p_;
};

// One-hot on class 1 or 2 depending on the parity of round(|y| * steps).
class AlternatingOracle : public ClassifierOracle {
 public:
  explicit AlternatingOracle(int steps) : steps_(steps) {}
  ClassProbs Classify(const C2A2Point& y) const override {
    ClassProbs p{};
    p[std::lround(y.norm() * steps_) % 2 ? 1 : 2] = 1.0;
    return p;
  }

 private:
  int steps_;
};

ClassProbs OneHot(std::size_t i) {
  ClassProbs p{};
  p[i] = 1.0;
  return p;
}

TEST(FitGaussianTest, IdenticalRows) {
  Eigen::MatrixXd x(5, 3);
  x.rowwise() = Eigen::RowVector3d(1.0, -2.0, 0.5);
  const FeatureStats s = FitGaussian(x);
  EXPECT_EQ(s.mean, Eigen::Vector3d(1.0, -2.0, 0.5));
  EXPECT_EQ(s.cov.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.count, 5u);
}

TEST(FitGaussianTest, UnbiasedDivisor) {
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 2.0;
  const FeatureStats s = FitGaussian(x);
  EXPECT_DOUBLE_EQ(s.mean(0), 1.0);
  EXPECT_DOUBLE_EQ(s.cov(0, 0), 2.0);
}

TEST(FitGaussianTest, SymmetricPsd) {
  const Eigen::MatrixXd x = Gaussian(40, 6, 1) * RandomSpd(6, 2);
  const FeatureStats s = FitGaussian(x);
  EXPECT_EQ(s.cov, s.cov.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.cov);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
  // Independent two-pass covariance.
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  EXPECT_LT((s.cov - c.transpose() * c / 39.0).norm(), 1e-12);
}

TEST(FitGaussianTest, Errors) {
  EXPECT_C2A2_ERROR(FitGaussian(Eigen::MatrixXd::Ones(1, 3)),
                    ErrorCode::kTooFewSamples);
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 2);
  x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_C2A2_ERROR(FitGaussian(x), ErrorCode::kNonFinite);
}

TEST(FrechetDistanceTest, IdenticalIsZero) {
  const FeatureStats s = Stats(Eigen::VectorXd::Ones(5), RandomSpd(5, 3));
  EXPECT_NEAR(FrechetDistance(s, s), 0.0, 1e-8);
}

TEST(FrechetDistanceTest, OneDimensional) {
  const FeatureStats a = Stats(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1));
  const FeatureStats b = Stats(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1));
  EXPECT_NEAR(FrechetDistance(a, b), 1.0, 1e-9);
  // (mu1 - mu2)^2 + (sigma1 - sigma2)^2 with sigma 1 and 3.
  const FeatureStats c =
      Stats(Eigen::VectorXd::Constant(1, 2.0), Eigen::MatrixXd::Constant(1, 1, 9.0));
  EXPECT_NEAR(FrechetDistance(a, c), 4.0 + 4.0, 1e-9);
}

TEST(FrechetDistanceTest, CommutingCovariances) {
  const Eigen::Vector2d mu = Eigen::Vector2d::Zero();
  const FeatureStats a = Stats(mu, Eigen::Vector2d(1, 4).asDiagonal().toDenseMatrix());
  const FeatureStats b = Stats(mu, Eigen::Vector2d(4, 1).asDiagonal().toDenseMatrix());
  EXPECT_NEAR(FrechetDistance(a, b), 2.0, 1e-9);
}

TEST(FrechetDistanceTest, SymmetricAndRotationInvariant) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d = 8;
    const FeatureStats a =
        Stats(Gaussian(1, d, seed).transpose(), RandomSpd(d, seed + 10));
    const FeatureStats b =
        Stats(Gaussian(1, d, seed + 20).transpose(), RandomSpd(d, seed + 30));
    const double fd = FrechetDistance(a, b);
    EXPECT_NEAR(FrechetDistance(b, a), fd, 1e-9 * std::max(1.0, fd));

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Gaussian(d, d, seed + 40));
    const Eigen::MatrixXd q = qr.householderQ();
    const FeatureStats ra = Stats(q * a.mean, q * a.cov * q.transpose());
    const FeatureStats rb = Stats(q * b.mean, q * b.cov * q.transpose());
    EXPECT_NEAR(FrechetDistance(ra, rb), fd, 1e-6);
  }
}

TEST(FrechetDistanceTest, SingularCovariances) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
  c(0, 0) = 1.0;
  const FeatureStats a = Stats(Eigen::VectorXd::Zero(3), c);
  const FeatureStats b = Stats(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 3));
  EXPECT_NEAR(FrechetDistance(a, b), 1.0, 1e-9);
  EXPECT_NEAR(FrechetDistance(a, a), 0.0, 1e-8);
}

TEST(FrechetDistanceTest, DimensionMismatch) {
  const FeatureStats a = Stats(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  const FeatureStats b = Stats(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_C2A2_ERROR(FrechetDistance(a, b), ErrorCode::kDimensionMismatch);
}

TEST(FedTest, IdenticalAndPermuted) {
  const Eigen::MatrixXd x = Gaussian(200, 4, 5);
  EXPECT_NEAR(Fed(x, x), 0.0, 1e-8);
  std::vector<int> perm(200);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 gen(6);
  std::shuffle(perm.begin(), perm.end(), gen);
  Eigen::MatrixXd y(200, 4);
  for (int i = 0; i < 200; ++i) y.row(i) = x.row(perm[i]);
  EXPECT_NEAR(Fed(x, y), 0.0, 1e-8);
  const Eigen::MatrixXd z = Gaussian(150, 4, 7);
  EXPECT_NEAR(Fed(x, z), Fed(y, z), 1e-9);
}

TEST(FedTest, ShiftedGaussiansMonteCarlo) {
  const double s = 2.0;
  const Eigen::MatrixXd x = Gaussian(10000, 4, 8);
  Eigen::MatrixXd y = Gaussian(10000, 4, 9);
  y.col(0).array() += s;
  EXPECT_NEAR(Fed(x, y), s * s, 0.05 * s * s);
}

TEST(SyntheticOracleTest, ValidProbabilities) {
  const AxisFrame f = ReferenceFrame();
  for (double sharp : {0.1, 5.0, 50.0, 500.0}) {
    const SyntheticOracle o(f, sharp);
    for (const C2A2Point& y :
         SampleConditions(SamplingMode::kUniformBall3D, 500, 1, f)) {
      const ClassProbs p = o.Classify(y);
      double sum = 0;
      for (double x : p) {
        EXPECT_GE(x, 0.0);
        sum += x;
      }
      EXPECT_NEAR(sum, 1.0, 1e-6);
    }
    const ClassProbs origin = o.Classify({0, 0, 0});
    EXPECT_EQ(std::max_element(origin.begin(), origin.end()) - origin.begin(), 0);
  }
  EXPECT_C2A2_ERROR(SyntheticOracle(f, 0.0), ErrorCode::kInvalidArgument);
}

TEST(SyntheticOracleTest, OnAxisFavoursAxisClass) {
  const AxisFrame f = ReferenceFrame();
  const SyntheticOracle o(f, 20.0);
  for (B e : kBasicEmotions) {
    const ClassProbs p = o.Classify(C2A2Point::FromVec(f.axis(e)));
    EXPECT_EQ(static_cast<std::size_t>(
                  std::max_element(p.begin(), p.end()) - p.begin()),
              OracleIndex(e));
  }
}

TEST(EreTest, PerfectOracleIsZero) {
  const AxisFrame f = ReferenceFrame();
  for (B e : kBasicEmotions) {
    const ConstantOracle o(OneHot(OracleIndex(e)));
    const B t[] = {e};
    EXPECT_EQ(Ere(o, t, f, {.budget = 20, .runs = 3}), 0.0);
  }
}

TEST(EreTest, UniformOracle) {
  ClassProbs p;
  p.fill(1.0 / 7.0);
  const ConstantOracle o(p);
  const double ere = Ere(o, kBasicEmotions, ReferenceFrame(), {.budget = 50});
  EXPECT_EQ(ere, 1.0 - 1.0 / 7.0);
  EXPECT_LE(std::abs(ere - 6.0 / 7.0), std::numeric_limits<double>::epsilon());
}

TEST(EreTest, MonotoneInBudget) {
  const AxisFrame f = ReferenceFrame();
  const SyntheticOracle o(f, 5.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    double prev = 2.0;
    for (std::size_t budget : {1, 10, 50, 200}) {
      const double e = Ere(o, kBasicEmotions, f,
                           {.budget = budget, .runs = 3, .seed = seed});
      EXPECT_LE(e, prev);
      prev = e;
    }
  }
}

TEST(EreTest, DeterministicAndTwoDMode) {
  const AxisFrame f = ReferenceFrame();
  const SyntheticOracle o(f, 5.0);
  const EreOptions opt{.budget = 30, .runs = 2, .seed = 4,
                       .space = SearchSpace::kTwoD};
  EXPECT_EQ(Ere(o, kBasicEmotions, f, opt), Ere(o, kBasicEmotions, f, opt));
  EXPECT_GE(Ere(o, kBasicEmotions, f, opt), 0.0);
  EXPECT_LE(Ere(o, kBasicEmotions, f, opt), 1.0);
}

TEST(EreTest, Errors) {
  const AxisFrame f = ReferenceFrame();
  const SyntheticOracle o(f, 5.0);
  const B neutral[] = {B::kNeutral};
  EXPECT_C2A2_ERROR(Ere(o, neutral, f, {}), ErrorCode::kInvalidArgument);
  EXPECT_C2A2_ERROR(Ere(o, kBasicEmotions, f, {.budget = 0}),
                    ErrorCode::kInvalidArgument);
  EXPECT_C2A2_ERROR(Ere(o, kBasicEmotions, f, {.runs = 0}),
                    ErrorCode::kInvalidArgument);
}

TEST(SmoothnessTest, ConstantAndAlternating) {
  const AxisFrame f = ReferenceFrame();
  const auto dirs = BasicDirections(f);
  EXPECT_EQ(Smoothness(ConstantOracle(OneHot(3)), dirs, 10), 0.0);
  EXPECT_EQ(Smoothness(AlternatingOracle(10), dirs, 10), 2.0);
}

TEST(SmoothnessTest, SharperOracleIsRougher) {
  const AxisFrame f = ReferenceFrame();
  const auto dirs = BasicDirections(f);
  const double s5 = Smoothness(SyntheticOracle(f, 5.0), dirs, 10);
  const double s50 = Smoothness(SyntheticOracle(f, 50.0), dirs, 10);
  EXPECT_LT(s5, s50);
}

// Reversing the steps along a ray is the same as evaluating the oracle on
// the mirrored intensities, which leaves the consecutive L1 sum unchanged.
class MirroredOracle : public ClassifierOracle {
 public:
  MirroredOracle(const ClassifierOracle& inner, int steps)
      : inner_(inner), steps_(steps) {}
  ClassProbs Classify(const C2A2Point& y) const override {
    const double r = y.norm();
    const double k = std::round(r * steps_);
    const double mirrored = (steps_ + 1 - k) / steps_;
    return inner_.Classify(C2A2Point::FromVec(y.vec() * (mirrored / r)));
  }

 private:
  const ClassifierOracle& inner_;
  int steps_;
};

TEST(SmoothnessTest, ReversalInvariant) {
  const AxisFrame f = ReferenceFrame();
  const auto dirs = BasicDirections(f);
  const SyntheticOracle o(f, 7.0);
  EXPECT_NEAR(Smoothness(MirroredOracle(o, 10), dirs, 10),
              Smoothness(o, dirs, 10), 1e-12);
}

TEST(SmoothnessTest, Errors) {
  const AxisFrame f = ReferenceFrame();
  const SyntheticOracle o(f, 5.0);
  const auto dirs = BasicDirections(f);
  EXPECT_C2A2_ERROR(Smoothness(o, dirs, 1), ErrorCode::kInvalidArgument);
  const Vec3 bad[] = {Vec3(1, 1, 0)};
  EXPECT_C2A2_ERROR(Smoothness(o, bad, 5), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace c2a2
