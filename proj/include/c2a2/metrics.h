#ifndef C2A2_METRICS_H_
#define C2A2_METRICS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "c2a2/emotion_space.h"

namespace c2a2 {

struct FeatureStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::size_t count = 0;
};

// Column means and the unbiased (n - 1) sample covariance of the rows,
// symmetrized. Throws kTooFewSamples for n < 2 and kNonFinite on NaN/inf.
FeatureStats FitGaussian(const Eigen::MatrixXd& features);

// ||mu1 - mu2||^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2}), with the trace of the
// cross term taken from the eigenvalues of sqrt(S1) S2 sqrt(S1).
double FrechetDistance(const FeatureStats& s1, const FeatureStats& s2);

// Fréchet emotion distance between two feature sets (rows are samples).
double Fed(const Eigen::MatrixXd& real, const Eigen::MatrixXd& generated);

// Oracle classes: index 0 is Neutral, 1..6 follow kBasicEmotions.
inline constexpr std::size_t kNumOracleClasses = 7;
using ClassProbs = std::array<double, kNumOracleClasses>;

std::size_t OracleIndex(BasicEmotion e);

class ClassifierOracle {
 public:
  virtual ~ClassifierOracle() = default;
  virtual ClassProbs Classify(const C2A2Point& y) const = 0;
};

// Softmax over logits sharpness * cos(y, axis_e) for each basic axis and
// 2 * sharpness * (1 - |y|) for Neutral. Along any ray only the Neutral
// logit moves, so the class trajectory is monotone in intensity.
class SyntheticOracle : public ClassifierOracle {
 public:
  SyntheticOracle(AxisFrame frame, double sharpness);

  ClassProbs Classify(const C2A2Point& y) const override;

  double sharpness() const { return sharpness_; }

 private:
  AxisFrame frame_;
  double sharpness_;
};

enum class SearchSpace { kTwoD, kThreeD };

struct EreOptions {
  std::size_t budget = 500;
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  SearchSpace space = SearchSpace::kThreeD;
};

// Emotion reconstruction error: for each target and run, the minimum of
// 1 - p(target) over `budget` uniform conditions; averaged over runs and
// targets. The draws for a (target, run) pair depend only on the seed, so a
// larger budget searches a superset of a smaller one.
double Ere(const ClassifierOracle& oracle,
           std::span<const BasicEmotion> targets, const AxisFrame& frame,
           const EreOptions& options);

// Mean L1 distance between oracle outputs at consecutive intensities
// rho = k / n_steps (k = 1..n_steps), averaged over the unit directions.
double Smoothness(const ClassifierOracle& oracle,
                  std::span<const Vec3> directions, std::size_t n_steps);

// The six basic axes of `frame`.
std::vector<Vec3> BasicDirections(const AxisFrame& frame);

}  // namespace c2a2

#endif  // C2A2_METRICS_H_
