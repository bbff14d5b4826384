#include "c2a2/emotion_space.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "json.hpp"

#include "c2a2/error.h"
#include "c2a2/random.h"

namespace c2a2 {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using B = BasicEmotion;
using C = CompoundEmotion;

struct CompoundInfo {
  C id;
  std::string_view name;
  std::array<B, 3> parts;
  std::size_t n_parts;
  bool in_2d;
  bool in_3d;
};

// Representability columns follow the 2D/3D comparison table; three-part
// entries are the decompositions happy+surprise+fear, disgust+surprise and
// disgust+anger+fear.
constexpr std::array<CompoundInfo, kNumCompound> kCompounds = {{
    {C::kHappilySad, "Happily sad", {B::kHappy, B::kSad}, 2, true, true},
    {C::kHappilySurprised, "Happily surprised", {B::kHappy, B::kSurprised}, 2,
     true, true},
    {C::kHappilyDisgusted, "Happily disgusted", {B::kHappy, B::kDisgusted}, 2,
     false, true},
    {C::kSadlyFearful, "Sadly fearful", {B::kSad, B::kFearful}, 2, false,
     true},
    {C::kSadlyAngry, "Sadly angry", {B::kSad, B::kAngry}, 2, false, true},
    {C::kSadlySurprised, "Sadly surprised", {B::kSad, B::kSurprised}, 2,
     false, true},
    {C::kSadlyDisgusted, "Sadly disgusted", {B::kSad, B::kDisgusted}, 2, true,
     true},
    {C::kFearfullyAngry, "Fearfully angry", {B::kFearful, B::kAngry}, 2, true,
     true},
    {C::kFearfullySurprised, "Fearfully surprised",
     {B::kFearful, B::kSurprised}, 2, true, true},
    {C::kFearfullyDisgusted, "Fearfully disgusted",
     {B::kFearful, B::kDisgusted}, 2, false, true},
    {C::kAngrilySurprised, "Angrily surprised", {B::kAngry, B::kSurprised}, 2,
     false, true},
    {C::kDisgustedlySurprised, "Disgustedly surprised",
     {B::kDisgusted, B::kSurprised}, 2, false, false},
    {C::kHappilyFearful, "Happily fearful", {B::kHappy, B::kFearful}, 2,
     false, true},
    {C::kAngrilyDisgusted, "Angrily disgusted", {B::kAngry, B::kDisgusted}, 2,
     true, true},
    {C::kAwed, "Awed", {B::kHappy, B::kSurprised, B::kFearful}, 3, false,
     true},
    {C::kAppalled, "Appalled", {B::kDisgusted, B::kSurprised}, 2, false,
     false},
    {C::kHatred, "Hatred", {B::kDisgusted, B::kAngry, B::kFearful}, 3, false,
     true},
}};

constexpr std::array<C, kNumCompound> kCompoundOrder = [] {
  std::array<C, kNumCompound> out{};
  for (std::size_t i = 0; i < kNumCompound; ++i) out[i] = kCompounds[i].id;
  return out;
}();

const CompoundInfo& Info(C c) { return kCompounds[static_cast<std::size_t>(c)]; }

std::size_t BasicIndex(B e) {
  const auto i = static_cast<std::size_t>(e);
  if (i >= kNumBasic) {
    throw Error(ErrorCode::kInvalidArgument, "neutral has no axis");
  }
  return i;
}

std::string Normalize(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    unsigned char u = static_cast<unsigned char>(ch);
    if (std::isspace(u) || ch == '_' || ch == '-' || ch == '+') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  // Abbreviations used in the reference tables.
  std::string expanded;
  std::istringstream words(out);
  std::string w;
  while (words >> w) {
    if (w == "disgd." || w == "disgd") {
      w = expanded.empty() ? "disgustedly" : "disgusted";
    }
    if (w == "surpd." || w == "surpd") w = "surprised";
    if (w == "feraful") w = "fearful";
    if (!expanded.empty()) expanded.push_back(' ');
    expanded += w;
  }
  return expanded;
}

void CheckFinite(double x, ErrorCode code, const char* what) {
  if (!std::isfinite(x)) {
    throw Error(code, std::string(what) + " is not finite");
  }
}

}  // namespace

std::span<const CompoundEmotion> AllCompounds() { return kCompoundOrder; }

std::span<const BasicEmotion> Constituents(CompoundEmotion c) {
  const CompoundInfo& info = Info(c);
  return {info.parts.data(), info.n_parts};
}

std::string_view Name(BasicEmotion e) {
  switch (e) {
    case B::kHappy: return "Happy";
    case B::kSad: return "Sad";
    case B::kFearful: return "Fearful";
    case B::kAngry: return "Angry";
    case B::kSurprised: return "Surprised";
    case B::kDisgusted: return "Disgusted";
    case B::kNeutral: return "Neutral";
  }
  return "?";
}

std::string_view Name(CompoundEmotion c) { return Info(c).name; }

std::string_view Name(const Category& c) {
  return std::visit([](auto e) { return Name(e); }, c);
}

std::string_view AxisKey(BasicEmotion e) {
  switch (e) {
    case B::kHappy: return "happy";
    case B::kSad: return "sad";
    case B::kFearful: return "fearful";
    case B::kAngry: return "angry";
    case B::kSurprised: return "surprised";
    case B::kDisgusted: return "disgusted";
    case B::kNeutral: return "neutral";
  }
  return "?";
}

std::optional<Category> ParseCategory(std::string_view text) {
  const std::string key = Normalize(text);
  static const std::array<std::pair<std::string_view, B>, 7> kSynonyms = {{
      {"happiness", B::kHappy},
      {"sadness", B::kSad},
      {"fear", B::kFearful},
      {"anger", B::kAngry},
      {"surprise", B::kSurprised},
      {"disgust", B::kDisgusted},
      {"neutrality", B::kNeutral},
  }};
  for (B e : {B::kHappy, B::kSad, B::kFearful, B::kAngry, B::kSurprised,
              B::kDisgusted, B::kNeutral}) {
    if (key == Normalize(Name(e))) return Category{e};
  }
  for (const auto& [syn, e] : kSynonyms) {
    if (key == syn) return Category{e};
  }
  for (const CompoundInfo& info : kCompounds) {
    if (key == Normalize(info.name)) return Category{info.id};
  }
  return std::nullopt;
}

std::size_t TableIndex(const Category& c) {
  if (const auto* b = std::get_if<BasicEmotion>(&c)) {
    return static_cast<std::size_t>(*b);
  }
  return kNumBasic + 1 + static_cast<std::size_t>(std::get<CompoundEmotion>(c));
}

bool IsNeutral(const Category& c) {
  const auto* b = std::get_if<BasicEmotion>(&c);
  return b != nullptr && *b == B::kNeutral;
}

void AVPoint::Validate() const {
  for (double x : {valence, arousal}) {
    if (!std::isfinite(x) || x < -1.0 || x > 1.0) {
      throw Error(ErrorCode::kOutOfRange,
                  "AV coordinate " + FormatDouble(x) + " outside [-1, 1]");
    }
  }
}

void PolarCondition::Validate() const {
  if (!std::isfinite(theta) || theta < 0.0 || theta >= kTwoPi) {
    throw Error(ErrorCode::kOutOfRange, "theta outside [0, 2pi)");
  }
  if (!std::isfinite(rho) || rho < 0.0 || rho > 1.0) {
    throw Error(ErrorCode::kOutOfRange, "rho outside [0, 1]");
  }
}

void C2A2Point::Validate() const {
  if (!std::isfinite(a) || !std::isfinite(v) || !std::isfinite(z)) {
    throw Error(ErrorCode::kOutOfBall, "non-finite coordinate");
  }
  if (a * a + v * v + z * z > 1.0 + kBallTolerance) {
    throw Error(ErrorCode::kOutOfBall, "point outside the unit ball");
  }
}

AxisFrame AxisFrame::FromAzimuths(const std::array<double, kNumBasic>& azimuths,
                                  double neutral_rho) {
  std::array<Vec3, kNumBasic> axes;
  for (std::size_t i = 0; i < kNumBasic; ++i) {
    CheckFinite(azimuths[i], ErrorCode::kInvalidArgument, "azimuth");
    const double c = std::cos(azimuths[i]);
    const double s = std::sin(azimuths[i]);
    switch (kBasicEmotions[i]) {
      case B::kFearful:
        axes[i] = Vec3(kLiftCos * c, kLiftCos * s, kLiftSin);
        break;
      case B::kSad:
        axes[i] = Vec3(kLiftCos * c, kLiftCos * s, -kLiftSin);
        break;
      default:
        axes[i] = Vec3(c, s, 0.0);
    }
  }
  return FromAxes(axes, neutral_rho);
}

AxisFrame AxisFrame::FromAxes(const std::array<Vec3, kNumBasic>& axes,
                              double neutral_rho) {
  constexpr double kTol = 1e-9;
  if (!(neutral_rho > 0.0 && neutral_rho < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "neutral_rho outside (0, 0.5)");
  }
  for (std::size_t i = 0; i < kNumBasic; ++i) {
    const Vec3& ax = axes[i];
    const std::string name(Name(kBasicEmotions[i]));
    if (!ax.allFinite() || std::abs(ax.norm() - 1.0) > kTol) {
      throw Error(ErrorCode::kInvalidArgument, name + " axis is not unit");
    }
    double want_z = 0.0;
    if (kBasicEmotions[i] == B::kFearful) want_z = kLiftSin;
    if (kBasicEmotions[i] == B::kSad) want_z = -kLiftSin;
    if (std::abs(ax.z() - want_z) > kTol) {
      throw Error(ErrorCode::kInvalidArgument,
                  name + " axis has the wrong elevation");
    }
  }
  AxisFrame frame;
  frame.axes_ = axes;
  frame.neutral_rho_ = neutral_rho;
  return frame;
}

const Vec3& AxisFrame::axis(BasicEmotion e) const { return axes_[BasicIndex(e)]; }

double AxisFrame::azimuth(BasicEmotion e) const {
  const Vec3& ax = axis(e);
  return WrapAngle(std::atan2(ax.y(), ax.x()));
}

AxisFrame ReferenceFrame() {
  constexpr double kDeg = std::numbers::pi / 180.0;
  // Order: happy, sad, fearful, angry, surprised, disgusted.
  return AxisFrame::FromAzimuths({16.0 * kDeg, 210.0 * kDeg, 117.0 * kDeg,
                                  135.0 * kDeg, 75.0 * kDeg, 159.0 * kDeg});
}

AxisFrame CalibrateAxes(std::span<const CalibrationSample> samples,
                        double neutral_rho) {
  std::array<double, kNumBasic> sum_v{};
  std::array<double, kNumBasic> sum_a{};
  std::array<std::size_t, kNumBasic> count{};
  for (const CalibrationSample& s : samples) {
    s.av.Validate();
    if (s.emotion == B::kNeutral) continue;
    const std::size_t i = BasicIndex(s.emotion);
    sum_v[i] += s.av.valence;
    sum_a[i] += s.av.arousal;
    ++count[i];
  }
  std::array<double, kNumBasic> azimuths{};
  for (std::size_t i = 0; i < kNumBasic; ++i) {
    const std::string name(Name(kBasicEmotions[i]));
    if (count[i] == 0) {
      throw Error(ErrorCode::kMissingCategory, "no samples for " + name);
    }
    const double mv = sum_v[i] / static_cast<double>(count[i]);
    const double ma = sum_a[i] / static_cast<double>(count[i]);
    if (mv == 0.0 && ma == 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mean AV of " + name + " is the origin; azimuth undefined");
    }
    azimuths[i] = std::atan2(ma, mv);
  }
  return AxisFrame::FromAzimuths(azimuths, neutral_rho);
}

AVPoint PolarToAv(const PolarCondition& p) {
  return {p.rho * std::cos(p.theta), p.rho * std::sin(p.theta)};
}

AVPoint ProjectToAv(const C2A2Point& y) { return {y.a, y.v}; }

C2A2Point EmbedAv(const AVPoint& p) { return {p.valence, p.arousal, 0.0}; }

double WrapAngle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

Vec3 CompoundDirection(CompoundEmotion c, const AxisFrame& frame) {
  Vec3 sum = Vec3::Zero();
  for (B e : Constituents(c)) sum += frame.axis(e);
  const double n = sum.norm();
  if (!(n >= 1e-9)) {
    throw Error(ErrorCode::kDegenerateSum,
                std::string(Name(c)) + " constituents cancel");
  }
  return sum / n;
}

bool IsRepresentable(CompoundEmotion c, EmotionModel model) {
  const CompoundInfo& info = Info(c);
  return model == EmotionModel::kTwoD ? info.in_2d : info.in_3d;
}

std::vector<Candidate> CandidateDirections(const AxisFrame& frame,
                                           EmotionModel model) {
  std::vector<Candidate> out;
  out.reserve(kNumBasic + kNumCompound);
  for (B e : kBasicEmotions) out.push_back({e, frame.axis(e)});
  for (C c : kCompoundOrder) {
    if (IsRepresentable(c, model)) {
      out.push_back({c, CompoundDirection(c, frame)});
    }
  }
  return out;
}

EmotionEstimate NearestEmotion(const C2A2Point& y, const AxisFrame& frame) {
  y.Validate();
  const double r = y.norm();
  if (r < frame.neutral_rho()) return {kNeutral, r};
  const Vec3 p = y.vec();
  const std::vector<Candidate> candidates =
      CandidateDirections(frame, EmotionModel::kThreeD);
  std::size_t best = 0;
  double best_cos = -2.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double cos = p.dot(candidates[i].direction) / r;
    if (cos > best_cos) {  // strict: earlier table entries win ties
      best_cos = cos;
      best = i;
    }
  }
  return {candidates[best].category, r};
}

std::vector<C2A2Point> SampleConditions(SamplingMode mode, std::size_t n,
                                        std::uint64_t seed,
                                        const AxisFrame& frame,
                                        double jitter_deg) {
  if (!(jitter_deg >= 0.0 && jitter_deg <= 30.0)) {
    throw Error(ErrorCode::kInvalidArgument, "jitter_deg outside [0, 30]");
  }
  Rng rng(seed);
  std::vector<C2A2Point> out;
  out.reserve(n);
  switch (mode) {
    case SamplingMode::kUniform2D:
      for (std::size_t i = 0; i < n; ++i) {
        const double theta = kTwoPi * rng.Uniform();
        const double rho = rng.Uniform();
        out.push_back({rho * std::cos(theta), rho * std::sin(theta), 0.0});
      }
      break;
    case SamplingMode::kUniformBall3D:
      while (out.size() < n) {
        const Vec3 p(rng.Uniform(-1.0, 1.0), rng.Uniform(-1.0, 1.0),
                     rng.Uniform(-1.0, 1.0));
        if (p.squaredNorm() <= 1.0) out.push_back(C2A2Point::FromVec(p));
      }
      break;
    case SamplingMode::kAxisProximity3D: {
      const std::vector<Candidate> candidates =
          CandidateDirections(frame, EmotionModel::kThreeD);
      const double cos_max = std::cos(jitter_deg * std::numbers::pi / 180.0);
      for (std::size_t i = 0; i < n; ++i) {
        const Vec3& d = candidates[rng.Index(candidates.size())].direction;
        const double cos_a = 1.0 - rng.Uniform() * (1.0 - cos_max);
        const double phi = kTwoPi * rng.Uniform();
        const double rho = rng.Uniform();
        Vec3 dir = d;
        if (jitter_deg > 0.0) {
          // Uniform over the spherical cap around d.
          const Vec3 helper = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
          const Vec3 e1 = d.cross(helper).normalized();
          const Vec3 e2 = d.cross(e1);
          const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
          dir = (cos_a * d + sin_a * (std::cos(phi) * e1 + std::sin(phi) * e2))
                    .normalized();
        }
        out.push_back(C2A2Point::FromVec(rho * dir));
      }
      break;
    }
  }
  return out;
}

std::vector<ScanPoint> CircleScan(double z_level, std::size_t n_theta,
                                  double radius) {
  if (n_theta == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_theta must be >= 1");
  }
  if (!std::isfinite(radius) || radius < 0.0 || !std::isfinite(z_level)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid radius or z level");
  }
  if (radius * radius + z_level * z_level > 1.0 + 1e-12) {
    throw Error(ErrorCode::kOutOfBall, "radius^2 + z^2 = " +
                                           FormatDouble(radius * radius +
                                                        z_level * z_level) +
                                           " exceeds 1");
  }
  std::vector<ScanPoint> out;
  out.reserve(n_theta);
  for (std::size_t k = 0; k < n_theta; ++k) {
    const double theta =
        kTwoPi * static_cast<double>(k) / static_cast<double>(n_theta);
    out.push_back(
        {theta, {radius * std::cos(theta), radius * std::sin(theta), z_level}});
  }
  return out;
}

std::vector<RayPoint> AxisRays(const AxisFrame& frame, std::size_t n_steps) {
  if (n_steps == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_steps must be >= 1");
  }
  std::vector<RayPoint> out;
  for (B e : kBasicEmotions) {
    for (std::size_t k = 1; k <= n_steps; ++k) {
      const double rho = static_cast<double>(k) / static_cast<double>(n_steps);
      out.push_back({e, rho, C2A2Point::FromVec(rho * frame.axis(e))});
    }
  }
  return out;
}

std::string FormatDouble(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x + 0.0);  // folds -0 into 0
  return buf;
}

std::string FrameToJson(const AxisFrame& frame) {
  std::string out = "{\n  \"axes\": {\n";
  for (std::size_t i = 0; i < kNumBasic; ++i) {
    const Vec3& ax = frame.axes()[i];
    out += "    \"";
    out += AxisKey(kBasicEmotions[i]);
    out += "\": [" + FormatDouble(ax.x()) + ", " + FormatDouble(ax.y()) +
           ", " + FormatDouble(ax.z()) + "]";
    out += i + 1 < kNumBasic ? ",\n" : "\n";
  }
  out += "  },\n  \"neutral_rho\": " + FormatDouble(frame.neutral_rho()) +
         "\n}\n";
  return out;
}

AxisFrame FrameFromJson(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("frame JSON: ") + e.what());
  }
  try {
    std::array<Vec3, kNumBasic> axes;
    const auto& jaxes = doc.at("axes");
    for (std::size_t i = 0; i < kNumBasic; ++i) {
      const auto& v = jaxes.at(std::string(AxisKey(kBasicEmotions[i])));
      if (!v.is_array() || v.size() != 3) {
        throw Error(ErrorCode::kParseError, "axis must have 3 coordinates");
      }
      axes[i] = Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
    return AxisFrame::FromAxes(axes, doc.at("neutral_rho").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("frame JSON: ") + e.what());
  }
}

}  // namespace c2a2
