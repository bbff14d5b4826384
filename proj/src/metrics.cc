#include "c2a2/metrics.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include <Eigen/Eigenvalues>

#include "c2a2/error.h"
#include "c2a2/random.h"

namespace c2a2 {
namespace {

constexpr double kNegEigenTolerance = -1e-8;
constexpr double kFirstJitter = 1e-10;
constexpr double kMaxJitter = 1e-6;

// Neutral and on-axis logits cross at |y| = 1/2.
constexpr double kNeutralScale = 2.0;

// Neumaier-compensated running sum, accumulated in call order.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// sqrt of a symmetric PSD matrix; nullopt when the eigensolver fails or an
// eigenvalue is meaningfully negative.
std::optional<Eigen::MatrixXd> SqrtPsd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (lambda.size() > 0 && lambda.minCoeff() < kNegEigenTolerance) {
    return std::nullopt;
  }
  const Eigen::VectorXd root = lambda.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() *
         eig.eigenvectors().transpose();
}

// Tr((a b)^{1/2}) for symmetric PSD a, b.
std::optional<double> TraceSqrtProduct(const Eigen::MatrixXd& a,
                                       const Eigen::MatrixXd& b) {
  const auto root_a = SqrtPsd(a);
  if (!root_a) return std::nullopt;
  Eigen::MatrixXd m = *root_a * b * *root_a;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (lambda.size() > 0 && lambda.minCoeff() < kNegEigenTolerance) {
    return std::nullopt;
  }
  return lambda.cwiseMax(0.0).cwiseSqrt().sum();
}

}  // namespace

FeatureStats FitGaussian(const Eigen::MatrixXd& features) {
  if (features.rows() < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "need at least 2 samples, got " +
                    std::to_string(features.rows()));
  }
  if (!features.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "feature matrix");
  }
  FeatureStats s;
  s.count = static_cast<std::size_t>(features.rows());
  s.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - s.mean.transpose();
  const Eigen::MatrixXd c =
      centered.transpose() * centered / static_cast<double>(features.rows() - 1);
  s.cov = 0.5 * (c + c.transpose());
  return s;
}

double FrechetDistance(const FeatureStats& s1, const FeatureStats& s2) {
  const Eigen::Index d = s1.mean.size();
  if (s2.mean.size() != d || s1.cov.rows() != d || s1.cov.cols() != d ||
      s2.cov.rows() != d || s2.cov.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature dimensions " + std::to_string(d) + " vs " +
                    std::to_string(s2.mean.size()));
  }
  const double mean_term = (s1.mean - s2.mean).squaredNorm();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);

  double jitter = 0.0;
  while (true) {
    const Eigen::MatrixXd a = s1.cov + jitter * id;
    const Eigen::MatrixXd b = s2.cov + jitter * id;
    if (const auto cross = TraceSqrtProduct(a, b)) {
      const double value = mean_term + a.trace() + b.trace() - 2.0 * *cross;
      return std::max(0.0, value);
    }
    jitter = jitter == 0.0 ? kFirstJitter : jitter * 10.0;
    if (jitter > kMaxJitter * 1.5) {
      throw Error(ErrorCode::kNumericalFailure,
                  "matrix square root failed after jitter up to 1e-6");
    }
  }
}

double Fed(const Eigen::MatrixXd& real, const Eigen::MatrixXd& generated) {
  return FrechetDistance(FitGaussian(real), FitGaussian(generated));
}

std::size_t OracleIndex(BasicEmotion e) {
  if (e == BasicEmotion::kNeutral) return 0;
  return static_cast<std::size_t>(e) + 1;
}

SyntheticOracle::SyntheticOracle(AxisFrame frame, double sharpness)
    : frame_(std::move(frame)), sharpness_(sharpness) {
  if (!(sharpness > 0.0) || !std::isfinite(sharpness)) {
    throw Error(ErrorCode::kInvalidArgument, "sharpness must be > 0");
  }
}

ClassProbs SyntheticOracle::Classify(const C2A2Point& y) const {
  const Vec3 p = y.vec();
  const double r = p.norm();
  ClassProbs logits;
  logits[0] = kNeutralScale * sharpness_ * (1.0 - r);
  for (BasicEmotion e : kBasicEmotions) {
    const double cos = r > 0.0 ? p.dot(frame_.axis(e)) / r : 0.0;
    logits[OracleIndex(e)] = sharpness_ * cos;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    sum += l;
  }
  for (double& l : logits) l /= sum;
  return logits;
}

double Ere(const ClassifierOracle& oracle,
           std::span<const BasicEmotion> targets, const AxisFrame& frame,
           const EreOptions& options) {
  if (targets.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no ERE targets");
  }
  if (options.budget == 0 || options.runs == 0) {
    throw Error(ErrorCode::kInvalidArgument, "budget and runs must be >= 1");
  }
  const SamplingMode mode = options.space == SearchSpace::kTwoD
                                ? SamplingMode::kUniform2D
                                : SamplingMode::kUniformBall3D;
  CompensatedSum total;
  for (BasicEmotion target : targets) {
    if (target == BasicEmotion::kNeutral) {
      throw Error(ErrorCode::kInvalidArgument, "Neutral is not an ERE target");
    }
    const std::size_t cls = OracleIndex(target);
    for (std::size_t run = 0; run < options.runs; ++run) {
      const std::uint64_t stream = DeriveSeed(options.seed, {cls, run});
      double best = 1.0;
      for (const C2A2Point& y :
           SampleConditions(mode, options.budget, stream, frame)) {
        best = std::min(best, 1.0 - oracle.Classify(y)[cls]);
      }
      total.Add(best);
    }
  }
  return total.value() / static_cast<double>(targets.size() * options.runs);
}

double Smoothness(const ClassifierOracle& oracle,
                  std::span<const Vec3> directions, std::size_t n_steps) {
  if (n_steps < 2) {
    throw Error(ErrorCode::kInvalidArgument, "n_steps must be >= 2");
  }
  if (directions.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no smoothness directions");
  }
  double total = 0.0;
  for (const Vec3& d : directions) {
    const double n = d.norm();
    if (!(std::abs(n - 1.0) <= 1e-9)) {
      throw Error(ErrorCode::kInvalidArgument, "direction is not unit");
    }
    double ray = 0.0;
    ClassProbs prev{};
    for (std::size_t k = 1; k <= n_steps; ++k) {
      const double rho = static_cast<double>(k) / static_cast<double>(n_steps);
      const ClassProbs cur = oracle.Classify(C2A2Point::FromVec(rho * d));
      if (k > 1) {
        for (std::size_t c = 0; c < kNumOracleClasses; ++c) {
          ray += std::abs(cur[c] - prev[c]);
        }
      }
      prev = cur;
    }
    total += ray / static_cast<double>(n_steps - 1);
  }
  return total / static_cast<double>(directions.size());
}

std::vector<Vec3> BasicDirections(const AxisFrame& frame) {
  return {frame.axes().begin(), frame.axes().end()};
}

}  // namespace c2a2
