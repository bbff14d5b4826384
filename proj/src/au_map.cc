#include "c2a2/au_map.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include "c2a2/error.h"

namespace c2a2 {
namespace {

const AUSet& BasicAUs(BasicEmotion e) {
  static const std::array<AUSet, kNumBasic> kTable = {{
      {12, 25},         // Happy
      {4, 15},          // Sad
      {1, 4, 20, 25},   // Fearful
      {4, 7, 24},       // Angry
      {1, 2, 25, 26},   // Surprised
      {9, 10, 17},      // Disgusted
  }};
  return kTable[static_cast<std::size_t>(e)];
}

const AUSet& CompoundAUs(CompoundEmotion c) {
  static const std::array<AUSet, kNumCompound> kTable = {{
      {4, 6, 12, 25},      // Happily sad
      {1, 2, 12, 25},      // Happily surprised
      {10, 12, 25},        // Happily disgusted
      {1, 4, 15, 25},      // Sadly fearful
      {4, 7, 15},          // Sadly angry
      {1, 4, 25, 26},      // Sadly surprised
      {4, 10},             // Sadly disgusted
      {4, 20, 25},         // Fearfully angry
      {1, 2, 5, 20, 25},   // Fearfully surprised
      {1, 4, 10, 20, 25},  // Fearfully disgusted
      {4, 25, 26},         // Angrily surprised
      {1, 2, 5, 10},       // Disgustedly surprised
      {1, 2, 12, 25, 26},  // Happily fearful
      {4, 10, 17},         // Angrily disgusted
      {1, 2, 5, 25},       // Awed
      {4, 9, 10},          // Appalled
      {4, 7, 10},          // Hatred
  }};
  return kTable[static_cast<std::size_t>(c)];
}

// The 2D-representable compound made of exactly {a, b}, if any.
std::optional<CompoundEmotion> PlanarCompound(BasicEmotion a, BasicEmotion b) {
  for (CompoundEmotion c : AllCompounds()) {
    if (!IsRepresentable(c, EmotionModel::kTwoD)) continue;
    auto parts = Constituents(c);
    if (parts.size() != 2) continue;
    if ((parts[0] == a && parts[1] == b) || (parts[0] == b && parts[1] == a)) {
      return c;
    }
  }
  return std::nullopt;
}

double Clamp(double p) {
  return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

}  // namespace

int RelevantIndex(int id) {
  const auto it = std::find(kRelevantAUs.begin(), kRelevantAUs.end(), id);
  return it == kRelevantAUs.end()
             ? -1
             : static_cast<int>(std::distance(kRelevantAUs.begin(), it));
}

AUSet CategoryToAUs(const Category& category) {
  if (IsNeutral(category)) {
    throw Error(ErrorCode::kNeutralHasNoAUs, "Neutral has no AU set");
  }
  if (const auto* b = std::get_if<BasicEmotion>(&category)) return BasicAUs(*b);
  return CompoundAUs(std::get<CompoundEmotion>(category));
}

std::vector<Category> AuTableCategories() {
  std::vector<Category> out(kBasicEmotions.begin(), kBasicEmotions.end());
  for (CompoundEmotion c : AllCompounds()) out.emplace_back(c);
  return out;
}

std::string AuTableCsv() {
  std::string out = "category,au_ids\n";
  for (const Category& c : AuTableCategories()) {
    out += Name(c);
    out += ',';
    const AUSet aus = CategoryToAUs(c);
    for (std::size_t i = 0; i < aus.size(); ++i) {
      if (i > 0) out += ';';
      out += std::to_string(aus[i]);
    }
    out += '\n';
  }
  return out;
}

Category AvRegionLabel(const AVPoint& p, const AxisFrame& frame) {
  p.Validate();
  if (std::hypot(p.valence, p.arousal) < frame.neutral_rho()) return kNeutral;

  std::array<BasicEmotion, kNumBasic> order = kBasicEmotions;
  std::stable_sort(order.begin(), order.end(),
                   [&](BasicEmotion x, BasicEmotion y) {
                     return frame.azimuth(x) < frame.azimuth(y);
                   });
  const double theta = WrapAngle(std::atan2(p.arousal, p.valence));

  // Gap i runs counter-clockwise from order[i] to order[i + 1].
  for (std::size_t i = 0; i < kNumBasic; ++i) {
    const BasicEmotion lo = order[i];
    const BasicEmotion hi = order[(i + 1) % kNumBasic];
    const double gap = WrapAngle(frame.azimuth(hi) - frame.azimuth(lo));
    const double offset = WrapAngle(theta - frame.azimuth(lo));
    if (offset >= gap) continue;
    if (const auto compound = PlanarCompound(lo, hi)) {
      if (offset < gap / 4.0) return lo;
      if (offset <= gap - gap / 4.0) return *compound;
      return hi;
    }
    return offset < gap / 2.0 ? lo : hi;
  }
  // Only reachable when every basic shares one azimuth.
  return order[0];
}

Category C2A2RegionLabel(const C2A2Point& y, const AxisFrame& frame) {
  y.Validate();
  if (y.z == 0.0) return AvRegionLabel(ProjectToAv(y), frame);
  return NearestEmotion(y, frame).category;
}

AUVector MakeAuTarget(const Category& category, double intensity) {
  if (!(intensity >= 0.0 && intensity <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "intensity outside [0, 1]");
  }
  AUVector target;
  target.fill(kProbEpsilon);
  if (IsNeutral(category)) return target;
  for (int id : CategoryToAUs(category)) {
    target[static_cast<std::size_t>(RelevantIndex(id))] = Clamp(intensity);
  }
  return target;
}

AUVector RestrictActivation(const AUActivation& activation) {
  AUVector out;
  for (std::size_t i = 0; i < kNumRelevantAUs; ++i) {
    const double p = activation[static_cast<std::size_t>(kRelevantAUs[i] - 1)];
    out[i] = Clamp(p);
  }
  for (double p : activation) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorCode::kRangeViolation,
                  "AU activation " + FormatDouble(p) + " outside [0, 1]");
    }
  }
  return out;
}

}  // namespace c2a2
