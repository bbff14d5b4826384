#ifndef C2A2_AU_MAP_H_
#define C2A2_AU_MAP_H_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "c2a2/emotion_space.h"

namespace c2a2 {

// Size of the AU activation catalogue; activation vectors are indexed by
// id - 1 for ids 1..41.
inline constexpr std::size_t kNumCatalogueAUs = 41;
inline constexpr std::size_t kNumRelevantAUs = 15;

inline constexpr std::array<int, kNumRelevantAUs> kRelevantAUs = {
    1, 2, 4, 5, 6, 7, 9, 10, 12, 15, 17, 20, 24, 25, 26};

// Probability floor/ceiling keeping KL terms finite.
inline constexpr double kProbEpsilon = 1e-4;

using AUSet = std::vector<int>;  // ascending ids

using AUActivation = std::array<double, kNumCatalogueAUs>;
using AUVector = std::array<double, kNumRelevantAUs>;  // relevant-id order

// Position of `id` in kRelevantAUs, or -1.
int RelevantIndex(int id);

// Throws kNeutralHasNoAUs for Neutral.
AUSet CategoryToAUs(const Category& category);

// Every non-Neutral category in table order (6 basics, then 17 compounds).
std::vector<Category> AuTableCategories();

// "category,au_ids" header plus 23 rows, ids separated by ';'.
std::string AuTableCsv();

// Quarter/half/quarter partition of each gap between azimuth-adjacent basics.
Category AvRegionLabel(const AVPoint& p, const AxisFrame& frame);

// In-plane points (z == 0) use AvRegionLabel on the projection; lifted
// points take the cosine argmax over basics and 3D-representable compounds.
Category C2A2RegionLabel(const C2A2Point& y, const AxisFrame& frame);

// Target AU probabilities: clamp(intensity) on the category's AUs, epsilon
// elsewhere; Neutral is all epsilon.
AUVector MakeAuTarget(const Category& category, double intensity);

// Relevant entries in ascending id order, clamped to [eps, 1 - eps].
// Throws kRangeViolation on entries outside [0, 1].
AUVector RestrictActivation(const AUActivation& activation);

}  // namespace c2a2

#endif  // C2A2_AU_MAP_H_
