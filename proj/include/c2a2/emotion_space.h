#ifndef C2A2_EMOTION_SPACE_H_
#define C2A2_EMOTION_SPACE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace c2a2 {

using Vec3 = Eigen::Vector3d;

// Enumerator order is the order of the category/AU reference table and is
// the tie-break order used by every argmax in this library.
enum class BasicEmotion : std::uint8_t {
  kHappy,
  kSad,
  kFearful,
  kAngry,
  kSurprised,
  kDisgusted,
  kNeutral,
};

inline constexpr std::size_t kNumBasic = 6;  // Neutral excluded.

inline constexpr std::array<BasicEmotion, kNumBasic> kBasicEmotions = {
    BasicEmotion::kHappy,     BasicEmotion::kSad,   BasicEmotion::kFearful,
    BasicEmotion::kAngry,     BasicEmotion::kSurprised,
    BasicEmotion::kDisgusted,
};

enum class CompoundEmotion : std::uint8_t {
  kHappilySad,
  kHappilySurprised,
  kHappilyDisgusted,
  kSadlyFearful,
  kSadlyAngry,
  kSadlySurprised,
  kSadlyDisgusted,
  kFearfullyAngry,
  kFearfullySurprised,
  kFearfullyDisgusted,
  kAngrilySurprised,
  kDisgustedlySurprised,
  kHappilyFearful,
  kAngrilyDisgusted,
  kAwed,
  kAppalled,
  kHatred,
};

inline constexpr std::size_t kNumCompound = 17;

using Category = std::variant<BasicEmotion, CompoundEmotion>;

inline constexpr Category kNeutral = BasicEmotion::kNeutral;

std::span<const CompoundEmotion> AllCompounds();

// Constituent basics in a fixed order (2 or 3 entries).
std::span<const BasicEmotion> Constituents(CompoundEmotion c);

std::string_view Name(BasicEmotion e);
std::string_view Name(CompoundEmotion c);
std::string_view Name(const Category& c);

// Lowercase identifier used as the frame JSON key ("happy", "sad", ...).
std::string_view AxisKey(BasicEmotion e);

// Case-insensitive; accepts the table names ("Happily surprised"), the
// abbreviated forms ("Disgd. surpd."), underscores/hyphens for spaces and a
// few dataset synonyms ("happiness", "fear", "anger", "surprise", ...).
std::optional<Category> ParseCategory(std::string_view text);

// Position in the global table order: basics 0..5, Neutral 6, compounds 7..
std::size_t TableIndex(const Category& c);

bool IsNeutral(const Category& c);

struct AVPoint {
  double valence = 0.0;
  double arousal = 0.0;

  // Throws kOutOfRange unless both coordinates are finite and in [-1, 1].
  void Validate() const;
};

struct PolarCondition {
  double theta = 0.0;  // radians, 0 at positive valence, counter-clockwise.
  double rho = 0.0;

  void Validate() const;
};

inline constexpr double kBallTolerance = 1e-9;

// Y = [A, V, Z]: a is valence, v is arousal, z the lifted coordinate.
struct C2A2Point {
  double a = 0.0;
  double v = 0.0;
  double z = 0.0;

  Vec3 vec() const { return {a, v, z}; }
  double norm() const { return vec().norm(); }
  static C2A2Point FromVec(const Vec3& p) { return {p.x(), p.y(), p.z()}; }

  // Throws kOutOfBall if non-finite or outside the unit ball (+1e-9).
  void Validate() const;
};

inline constexpr double kDefaultNeutralRho = 0.1;
inline constexpr double kDefaultJitterDeg = 10.0;

// Elevation of the fear (+) and sad (-) axes above the AV plane.
inline constexpr double kLiftCos = 0.5;                      // cos 60deg
inline constexpr double kLiftSin = 0.86602540378443864676;   // sin 60deg

class AxisFrame {
 public:
  // Builds a frame from planar azimuths (radians) indexed like kBasicEmotions.
  static AxisFrame FromAzimuths(const std::array<double, kNumBasic>& azimuths,
                                double neutral_rho = kDefaultNeutralRho);

  // Accepts explicit axes; throws kInvalidArgument if the frame invariants
  // (unit norm, planar/lifted z) do not hold within 1e-9.
  static AxisFrame FromAxes(const std::array<Vec3, kNumBasic>& axes,
                            double neutral_rho);

  const Vec3& axis(BasicEmotion e) const;
  const std::array<Vec3, kNumBasic>& axes() const { return axes_; }
  double azimuth(BasicEmotion e) const;
  double neutral_rho() const { return neutral_rho_; }

 private:
  AxisFrame() = default;

  std::array<Vec3, kNumBasic> axes_;
  double neutral_rho_ = kDefaultNeutralRho;
};

// A hand-placed circumplex arrangement, used when no calibrated frame is
// supplied: happy 16deg, surprised 75deg, fearful 117deg, angry 135deg,
// disgusted 159deg, sad 210deg.
AxisFrame ReferenceFrame();

struct CalibrationSample {
  BasicEmotion emotion;
  AVPoint av;
};

// Neutral samples are ignored.
AxisFrame CalibrateAxes(std::span<const CalibrationSample> samples,
                        double neutral_rho = kDefaultNeutralRho);

AVPoint PolarToAv(const PolarCondition& p);
AVPoint ProjectToAv(const C2A2Point& y);
C2A2Point EmbedAv(const AVPoint& p);

// Azimuth of a planar vector mapped to [0, 2pi).
double WrapAngle(double theta);

Vec3 CompoundDirection(CompoundEmotion c, const AxisFrame& frame);

enum class EmotionModel { kTwoD, kThreeD };

bool IsRepresentable(CompoundEmotion c, EmotionModel model);

// The basics followed by the compounds representable in `model`, in table
// order. Each direction is a unit vector.
struct Candidate {
  Category category;
  Vec3 direction;
};
std::vector<Candidate> CandidateDirections(const AxisFrame& frame,
                                           EmotionModel model);

struct EmotionEstimate {
  Category category;
  double intensity;
};

EmotionEstimate NearestEmotion(const C2A2Point& y, const AxisFrame& frame);

enum class SamplingMode { kUniform2D, kAxisProximity3D, kUniformBall3D };

std::vector<C2A2Point> SampleConditions(SamplingMode mode, std::size_t n,
                                        std::uint64_t seed,
                                        const AxisFrame& frame,
                                        double jitter_deg = kDefaultJitterDeg);

struct ScanPoint {
  double theta;
  C2A2Point y;
};

std::vector<ScanPoint> CircleScan(double z_level, std::size_t n_theta,
                                  double radius);

// Points along each basic axis at rho = k / n_steps, k = 1..n_steps.
struct RayPoint {
  BasicEmotion emotion;
  double rho;
  C2A2Point y;
};
std::vector<RayPoint> AxisRays(const AxisFrame& frame, std::size_t n_steps);

// Frame JSON: {"axes": {"happy": [x, y, z], ...}, "neutral_rho": r} with
// every double printed using 17 significant digits.
std::string FrameToJson(const AxisFrame& frame);
AxisFrame FrameFromJson(std::string_view json);

// %.17g rendering shared by every text output.
std::string FormatDouble(double x);

}  // namespace c2a2

#endif  // C2A2_EMOTION_SPACE_H_
