#ifndef C2A2_NUMBER_ENCODER_H_
#define C2A2_NUMBER_ENCODER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "c2a2/emotion_space.h"

namespace c2a2 {

inline constexpr std::size_t kEmbeddingDim = 768;

using EmotionEmbedding = Eigen::VectorXd;
// One token per row; columns are embedding features.
using TokenSequence =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense layers with tanh between them and a linear output layer. tanh(0) = 0,
// so a zero input with zero biases produces a zero embedding.
struct MlpParams {
  std::vector<std::size_t> dims;          // dims.front() == 3
  std::vector<Eigen::MatrixXd> weights;   // layer l: dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> biases;    // layer l: dims[l+1]

  std::size_t num_layers() const { return weights.size(); }

  // Shape chain and finiteness; throws kInvalidArgument.
  void Validate() const;
};

std::vector<std::size_t> DefaultEncoderDims();  // {3, 64, 256, 768}

// Xavier-uniform hidden weights, zero biases, and an all-zero output layer
// so the initial embedding is zero for every condition.
MlpParams InitEncoder(std::span<const std::size_t> dims, std::uint64_t seed);

// Throws kNonFinite if the forward pass overflows.
EmotionEmbedding EncodeEmotion(const C2A2Point& y, const MlpParams& params);

// Appends the emotion embedding as a final token.
TokenSequence Fuse(const TokenSequence& text, const EmotionEmbedding& e);

struct EncoderGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Vec3 input = Vec3::Zero();
};

// Reverse-mode gradients of <upstream, EncodeEmotion(y)>.
EncoderGradients EncoderBackward(const C2A2Point& y, const MlpParams& params,
                                 const Eigen::VectorXd& upstream);

struct RegressionExample {
  C2A2Point y;
  Eigen::VectorXd target;
};

struct TrainResult {
  MlpParams params;
  // loss_curve[t] is the mean squared error before step t; the last entry is
  // the loss after the final step (steps + 1 entries).
  std::vector<double> loss_curve;
};

// Gradient descent on the mean (over examples and embedding components) of
// the squared error. batch_size == 0 means full batch; otherwise each step
// uses a minibatch drawn from a seed-determined shuffle.
TrainResult TrainToyRegression(std::span<const RegressionExample> dataset,
                               MlpParams params, std::size_t steps,
                               double learning_rate, std::uint64_t seed,
                               std::size_t batch_size = 0);

// Conditions near the emotion directions paired with smooth synthetic
// targets tanh(M y), M fixed by the seed.
std::vector<RegressionExample> ToyRegressionDataset(std::size_t n,
                                                    std::size_t dim,
                                                    std::uint64_t seed);

// Little-endian binary: "C2A2MLP1", u32 layer count, u32 dims, then per
// layer the row-major f64 weight matrix followed by its f64 bias vector.
void SaveMlp(const MlpParams& params, const std::filesystem::path& path);
MlpParams LoadMlp(const std::filesystem::path& path);

}  // namespace c2a2

#endif  // C2A2_NUMBER_ENCODER_H_
