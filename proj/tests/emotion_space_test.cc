#include "c2a2/emotion_space.h"

#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "c2a2/error.h"
#include "test_util.h"

namespace c2a2 {
namespace {

using B = BasicEmotion;
using C = CompoundEmotion;

constexpr double kPi = std::numbers::pi;

double Deg(double d) { return d * kPi / 180.0; }

// Hand-built axis from an azimuth and an elevation, written out with plain
// trig so it does not share code with AxisFrame.
Vec3 Axis(double azimuth, double elevation) {
  return {std::cos(elevation) * std::cos(azimuth),
          std::cos(elevation) * std::sin(azimuth), std::sin(elevation)};
}

std::vector<CalibrationSample> SamplesAt(
    const std::array<AVPoint, kNumBasic>& centers) {
  std::vector<CalibrationSample> out;
  for (std::size_t i = 0; i < kNumBasic; ++i) {
    out.push_back({kBasicEmotions[i], centers[i]});
  }
  return out;
}

std::array<AVPoint, kNumBasic> DefaultCenters() {
  return {AVPoint{0.8, 0.2},  AVPoint{-0.6, -0.3}, AVPoint{-0.2, 0.7},
          AVPoint{-0.5, 0.5}, AVPoint{0.2, 0.8},   AVPoint{-0.7, 0.25}};
}

TEST(CalibrateAxesTest, HappyAzimuthFromClusterMean) {
  auto samples = SamplesAt(DefaultCenters());
  samples.push_back({B::kHappy, {0.8, 0.2}});
  const AxisFrame f = CalibrateAxes(samples);
  EXPECT_NEAR(f.azimuth(B::kHappy), std::atan2(0.2, 0.8), 1e-15);
  EXPECT_EQ(f.axis(B::kHappy).z(), 0.0);
  EXPECT_NEAR(f.axis(B::kHappy).norm(), 1.0, 1e-12);
}

TEST(CalibrateAxesTest, LiftedAxesSitAtSixtyDegrees) {
  const AxisFrame f = CalibrateAxes(SamplesAt(DefaultCenters()));
  EXPECT_NEAR(std::asin(f.axis(B::kFearful).z()), Deg(60), 1e-12);
  EXPECT_NEAR(std::asin(f.axis(B::kSad).z()), Deg(-60), 1e-12);
  for (B e : {B::kHappy, B::kAngry, B::kSurprised, B::kDisgusted}) {
    EXPECT_EQ(f.axis(e).z(), 0.0) << Name(e);
  }
  for (B e : kBasicEmotions) EXPECT_NEAR(f.axis(e).norm(), 1.0, 1e-12);
}

TEST(CalibrateAxesTest, LiftedProjectionKeepsAzimuth) {
  const auto centers = DefaultCenters();
  const AxisFrame f = CalibrateAxes(SamplesAt(centers));
  const AVPoint p = ProjectToAv(C2A2Point::FromVec(f.axis(B::kFearful)));
  EXPECT_NEAR(std::hypot(p.valence, p.arousal), 0.5, 1e-9);
  EXPECT_NEAR(std::atan2(p.arousal, p.valence),
              std::atan2(centers[2].arousal, centers[2].valence), 1e-12);
}

TEST(CalibrateAxesTest, AveragesSeveralSamples) {
  auto samples = SamplesAt(DefaultCenters());
  samples[3] = {B::kAngry, {-0.4, 0.6}};
  samples.push_back({B::kAngry, {-0.6, 0.2}});
  samples.push_back({B::kNeutral, {0.9, -0.9}});  // ignored
  const AxisFrame f = CalibrateAxes(samples);
  EXPECT_NEAR(f.azimuth(B::kAngry), std::atan2(0.4, -0.5), 1e-12);
}

TEST(CalibrateAxesTest, MissingCategory) {
  auto samples = SamplesAt(DefaultCenters());
  samples.erase(samples.begin() + 3);  // Angry
  EXPECT_C2A2_ERROR(CalibrateAxes(samples), ErrorCode::kMissingCategory);
}

TEST(CalibrateAxesTest, OutOfRangeSample) {
  auto samples = SamplesAt(DefaultCenters());
  samples.push_back({B::kSad, {-1.5, 0.0}});
  EXPECT_C2A2_ERROR(CalibrateAxes(samples), ErrorCode::kOutOfRange);
}

TEST(AxisFrameTest, FromAxesRejectsBrokenInvariants) {
  auto axes = ReferenceFrame().axes();
  axes[0] *= 1.01;
  EXPECT_C2A2_ERROR(AxisFrame::FromAxes(axes, 0.1), ErrorCode::kInvalidArgument);
  EXPECT_C2A2_ERROR(AxisFrame::FromAxes(ReferenceFrame().axes(), 0.5),
                    ErrorCode::kInvalidArgument);
}

TEST(PolarToAvTest, Examples) {
  AVPoint p = PolarToAv({0.0, 1.0});
  EXPECT_DOUBLE_EQ(p.valence, 1.0);
  EXPECT_DOUBLE_EQ(p.arousal, 0.0);
  p = PolarToAv({kPi / 2, 0.5});
  EXPECT_NEAR(p.valence, 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(p.arousal, 0.5);
  for (double theta : {0.3, 2.0, 5.9}) {
    p = PolarToAv({theta, 0.0});
    EXPECT_EQ(std::abs(p.valence) + std::abs(p.arousal), 0.0);
  }
}

TEST(ProjectToAvTest, Examples) {
  const AVPoint p = ProjectToAv({0.2, -0.5, 0.7});
  EXPECT_EQ(p.valence, 0.2);
  EXPECT_EQ(p.arousal, -0.5);
  const AVPoint q{0.31, -0.77};
  const AVPoint r = ProjectToAv(EmbedAv(q));
  EXPECT_EQ(r.valence, q.valence);
  EXPECT_EQ(r.arousal, q.arousal);
  EXPECT_EQ(EmbedAv(q).z, 0.0);
}

TEST(CompoundDirectionTest, HappilySurprisedIsInPlaneBisector) {
  const AxisFrame f = ReferenceFrame();
  const Vec3 d = CompoundDirection(C::kHappilySurprised, f);
  EXPECT_NEAR(d.norm(), 1.0, 1e-15);
  EXPECT_EQ(d.z(), 0.0);
  EXPECT_NEAR(std::atan2(d.y(), d.x()), Deg((16.0 + 75.0) / 2), 1e-12);
}

TEST(CompoundDirectionTest, AwedMatchesHandSum) {
  const AxisFrame f = ReferenceFrame();
  const Vec3 sum = Axis(Deg(16), 0) + Axis(Deg(75), 0) + Axis(Deg(117), Deg(60));
  const Vec3 d = CompoundDirection(C::kAwed, f);
  EXPECT_NEAR(d.z(), std::sin(Deg(60)) / sum.norm(), 1e-12);
  EXPECT_GT(d.z(), 0.0);
  EXPECT_LT((d - sum.normalized()).norm(), 1e-12);
}

TEST(CompoundDirectionTest, LiftSigns) {
  const AxisFrame f = ReferenceFrame();
  EXPECT_EQ(CompoundDirection(C::kSadlyFearful, f).z(), 0.0);
  EXPECT_LT(CompoundDirection(C::kSadlySurprised, f).z(), 0.0);
  EXPECT_GT(CompoundDirection(C::kHatred, f).z(), 0.0);
}

TEST(CompoundDirectionTest, DegenerateSum) {
  std::array<Vec3, kNumBasic> axes = ReferenceFrame().axes();
  axes[4] = -axes[0];  // Surprised opposite Happy
  const AxisFrame f = AxisFrame::FromAxes(axes, 0.1);
  EXPECT_C2A2_ERROR(CompoundDirection(C::kHappilySurprised, f),
                    ErrorCode::kDegenerateSum);
}

// Table 2 of the representability study, one row per compound in enum order.
struct RepRow {
  C c;
  bool two_d;
  bool three_d;
};
constexpr RepRow kTable2[] = {
    {C::kHappilySad, true, true},
    {C::kHappilySurprised, true, true},
    {C::kHappilyDisgusted, false, true},
    {C::kSadlyFearful, false, true},
    {C::kSadlyAngry, false, true},
    {C::kSadlySurprised, false, true},
    {C::kSadlyDisgusted, true, true},
    {C::kFearfullyAngry, true, true},
    {C::kFearfullySurprised, true, true},
    {C::kFearfullyDisgusted, false, true},
    {C::kAngrilySurprised, false, true},
    {C::kDisgustedlySurprised, false, false},
    {C::kHappilyFearful, false, true},
    {C::kAngrilyDisgusted, true, true},
    {C::kAwed, false, true},
    {C::kAppalled, false, false},
    {C::kHatred, false, true},
};

TEST(IsRepresentableTest, MatchesTable) {
  ASSERT_EQ(std::size(kTable2), kNumCompound);
  int n2 = 0, n3 = 0;
  for (const RepRow& r : kTable2) {
    EXPECT_EQ(IsRepresentable(r.c, EmotionModel::kTwoD), r.two_d) << Name(r.c);
    EXPECT_EQ(IsRepresentable(r.c, EmotionModel::kThreeD), r.three_d)
        << Name(r.c);
    n2 += IsRepresentable(r.c, EmotionModel::kTwoD);
    n3 += IsRepresentable(r.c, EmotionModel::kThreeD);
  }
  EXPECT_EQ(n2, 6);
  EXPECT_EQ(n3, 15);
}

TEST(NearestEmotionTest, OnAxisForEveryBasic) {
  const AxisFrame f = ReferenceFrame();
  for (B e : kBasicEmotions) {
    for (double s : {0.1001, 0.35, 0.8, 1.0}) {
      const EmotionEstimate est =
          NearestEmotion(C2A2Point::FromVec(s * f.axis(e)), f);
      EXPECT_EQ(est.category, Category(e)) << Name(e) << " s=" << s;
      EXPECT_NEAR(est.intensity, s, 1e-15);
    }
  }
}

TEST(NearestEmotionTest, BelowThresholdIsNeutral) {
  const EmotionEstimate est = NearestEmotion({0.01, 0.0, 0.0}, ReferenceFrame());
  EXPECT_TRUE(IsNeutral(est.category));
  EXPECT_DOUBLE_EQ(est.intensity, 0.01);
}

TEST(NearestEmotionTest, MidpointMatchesBruteForce) {
  const AxisFrame f = ReferenceFrame();
  const Vec3 h = Axis(Deg(16), 0), s = Axis(Deg(75), 0);
  const Vec3 y = 0.8 * (h + s).normalized();

  // Brute force over every basic axis and every 3D-representable compound,
  // summing constituent axes by hand.
  const std::vector<std::pair<Category, Vec3>> cands = [&] {
    std::vector<std::pair<Category, Vec3>> v;
    for (B e : kBasicEmotions) v.push_back({e, f.axis(e)});
    for (const RepRow& r : kTable2) {
      if (!r.three_d) continue;
      Vec3 sum = Vec3::Zero();
      for (B e : Constituents(r.c)) sum += f.axis(e);
      v.push_back({r.c, sum.normalized()});
    }
    return v;
  }();
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].second.dot(y) > cands[best].second.dot(y)) best = i;
  }
  ASSERT_EQ(cands[best].first, Category(C::kHappilySurprised));

  const EmotionEstimate est = NearestEmotion(C2A2Point::FromVec(y), f);
  EXPECT_EQ(est.category, cands[best].first);
  EXPECT_NEAR(est.intensity, 0.8, 1e-15);
}

TEST(SampleConditionsTest, Uniform2DRange) {
  const auto pts =
      SampleConditions(SamplingMode::kUniform2D, 1000, 42, ReferenceFrame());
  ASSERT_EQ(pts.size(), 1000u);
  for (const C2A2Point& p : pts) {
    EXPECT_EQ(p.z, 0.0);
    EXPECT_LE(p.norm(), 1.0);
  }
}

TEST(SampleConditionsTest, ZeroJitterLandsOnDirections) {
  const AxisFrame f = ReferenceFrame();
  const auto cands = CandidateDirections(f, EmotionModel::kThreeD);
  const auto pts =
      SampleConditions(SamplingMode::kAxisProximity3D, 100, 5, f, 0.0);
  for (const C2A2Point& p : pts) {
    if (p.norm() == 0.0) continue;
    const Vec3 u = p.vec().normalized();
    bool on = false;
    for (const Candidate& c : cands) on |= (u - c.direction).norm() < 1e-12;
    EXPECT_TRUE(on) << p.a << "," << p.v << "," << p.z;
  }
}

TEST(SampleConditionsTest, JitterStaysInCone) {
  const AxisFrame f = ReferenceFrame();
  const auto cands = CandidateDirections(f, EmotionModel::kThreeD);
  const auto pts =
      SampleConditions(SamplingMode::kAxisProximity3D, 2000, 9, f, 10.0);
  for (const C2A2Point& p : pts) {
    EXPECT_LE(p.norm(), 1.0 + 1e-12);
    if (p.norm() < 1e-9) continue;
    double best = -1;
    for (const Candidate& c : cands) {
      best = std::max(best, c.direction.dot(p.vec().normalized()));
    }
    EXPECT_GE(best, std::cos(Deg(10)) - 1e-12);
  }
}

TEST(SampleConditionsTest, DeterministicAndSeedSensitive) {
  const AxisFrame f = ReferenceFrame();
  for (SamplingMode m : {SamplingMode::kUniform2D, SamplingMode::kAxisProximity3D,
                         SamplingMode::kUniformBall3D}) {
    const auto a = SampleConditions(m, 64, 11, f);
    const auto b = SampleConditions(m, 64, 11, f);
    const auto c = SampleConditions(m, 64, 12, f);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].vec(), b[i].vec());
      differs |= a[i].vec() != c[i].vec();
    }
    EXPECT_TRUE(differs);
  }
}

TEST(SampleConditionsTest, BallModeFillsBall) {
  const auto pts = SampleConditions(SamplingMode::kUniformBall3D, 4000, 3,
                                    ReferenceFrame());
  int upper = 0;
  double inner = 0;
  for (const C2A2Point& p : pts) {
    EXPECT_LE(p.norm(), 1.0);
    upper += p.z > 0;
    inner += p.norm() < std::cbrt(0.5);
  }
  // Half the volume lies inside radius 0.5^(1/3); 4000 draws give sd ~0.008.
  EXPECT_NEAR(inner / pts.size(), 0.5, 0.04);
  EXPECT_NEAR(upper / 4000.0, 0.5, 0.04);
}

TEST(SampleConditionsTest, RejectsBadJitter) {
  EXPECT_C2A2_ERROR(SampleConditions(SamplingMode::kAxisProximity3D, 1, 0,
                                     ReferenceFrame(), 31.0),
                    ErrorCode::kInvalidArgument);
  EXPECT_TRUE(SampleConditions(SamplingMode::kUniform2D, 0, 0, ReferenceFrame())
                  .empty());
}

TEST(CircleScanTest, FourPointsOnUnitCircle) {
  const auto pts = CircleScan(0.0, 4, 1.0);
  ASSERT_EQ(pts.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(pts[k].theta, k * kPi / 2);
    EXPECT_NEAR(pts[k].y.a, std::cos(k * kPi / 2), 1e-15);
    EXPECT_NEAR(pts[k].y.v, std::sin(k * kPi / 2), 1e-15);
    EXPECT_EQ(pts[k].y.z, 0.0);
  }
}

TEST(CircleScanTest, LiftedLevel) {
  for (const ScanPoint& p : CircleScan(0.5, 10, 0.8)) {
    EXPECT_EQ(p.y.z, 0.5);
    EXPECT_NEAR(std::hypot(p.y.a, p.y.v), 0.8, 1e-15);
  }
  EXPECT_C2A2_ERROR(CircleScan(0.8, 10, 0.8), ErrorCode::kOutOfBall);
}

TEST(AxisRaysTest, StepsAlongAxes) {
  const AxisFrame f = ReferenceFrame();
  const auto rays = AxisRays(f, 4);
  ASSERT_EQ(rays.size(), 24u);
  EXPECT_EQ(rays[0].emotion, B::kHappy);
  EXPECT_DOUBLE_EQ(rays[0].rho, 0.25);
  EXPECT_DOUBLE_EQ(rays[3].rho, 1.0);
  EXPECT_LT((rays[3].y.vec() - f.axis(B::kHappy)).norm(), 1e-15);
}

TEST(FrameJsonTest, RoundTripIsBitExact) {
  const AxisFrame f = CalibrateAxes(SamplesAt(DefaultCenters()), 0.15);
  const std::string json = FrameToJson(f);
  const AxisFrame g = FrameFromJson(json);
  for (B e : kBasicEmotions) EXPECT_EQ(f.axis(e), g.axis(e)) << Name(e);
  EXPECT_EQ(f.neutral_rho(), g.neutral_rho());
  EXPECT_EQ(FrameToJson(g), json);
}

TEST(FrameJsonTest, RejectsMalformed) {
  EXPECT_C2A2_ERROR(FrameFromJson("{\"axes\": {}}"), ErrorCode::kParseError);
  EXPECT_C2A2_ERROR(FrameFromJson("not json"), ErrorCode::kParseError);
}

TEST(CategoryNamesTest, ParseAcceptsTableSpellings) {
  EXPECT_EQ(ParseCategory("Happily surprised"), Category(C::kHappilySurprised));
  EXPECT_EQ(ParseCategory("Disgd. surpd."), Category(C::kDisgustedlySurprised));
  EXPECT_EQ(ParseCategory("Sadly feraful"), Category(C::kSadlyFearful));
  EXPECT_EQ(ParseCategory("fearfully_disgusted"),
            Category(C::kFearfullyDisgusted));
  EXPECT_EQ(ParseCategory("FEAR"), Category(B::kFearful));
  EXPECT_EQ(ParseCategory("neutral"), kNeutral);
  EXPECT_FALSE(ParseCategory("contempt").has_value());
  EXPECT_FALSE(ParseCategory("").has_value());
}

TEST(CategoryNamesTest, NamesRoundTripAndOrderIsUnique) {
  std::set<std::size_t> idx;
  for (B e : kBasicEmotions) {
    EXPECT_EQ(ParseCategory(Name(e)), Category(e));
    idx.insert(TableIndex(e));
  }
  for (C c : AllCompounds()) {
    EXPECT_EQ(ParseCategory(Name(c)), Category(c));
    idx.insert(TableIndex(c));
  }
  EXPECT_EQ(idx.size(), kNumBasic + kNumCompound);
}

TEST(FormatDoubleTest, SeventeenDigits) {
  EXPECT_EQ(FormatDouble(0.1), "0.10000000000000001");
  EXPECT_EQ(FormatDouble(-0.0), "0");
  EXPECT_EQ(FormatDouble(1.0), "1");
}

}  // namespace
}  // namespace c2a2
