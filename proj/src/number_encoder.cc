#include "c2a2/number_encoder.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "c2a2/error.h"
#include "c2a2/random.h"

namespace c2a2 {
namespace {

constexpr char kMagic[8] = {'C', '2', 'A', '2', 'M', 'L', 'P', '1'};

struct ForwardTrace {
  std::vector<Eigen::VectorXd> inputs;  // h_l fed to layer l
  std::vector<Eigen::VectorXd> pre;     // z_l = W_l h_l + b_l
  Eigen::VectorXd output;
};

ForwardTrace Forward(const C2A2Point& y, const MlpParams& params) {
  ForwardTrace t;
  Eigen::VectorXd h = y.vec();
  const std::size_t n = params.num_layers();
  for (std::size_t l = 0; l < n; ++l) {
    t.inputs.push_back(h);
    Eigen::VectorXd z = params.weights[l] * h + params.biases[l];
    h = l + 1 < n ? Eigen::VectorXd(z.array().tanh()) : z;
    t.pre.push_back(std::move(z));
  }
  t.output = std::move(h);
  return t;
}

EncoderGradients Backward(const ForwardTrace& trace, const MlpParams& params,
                          Eigen::VectorXd g) {
  const std::size_t n = params.num_layers();
  EncoderGradients out;
  out.weights.resize(n);
  out.biases.resize(n);
  for (std::size_t l = n; l-- > 0;) {
    if (l + 1 < n) {
      const Eigen::ArrayXd th = trace.pre[l].array().tanh();
      g = (g.array() * (1.0 - th * th)).matrix();
    }
    out.weights[l] = g * trace.inputs[l].transpose();
    out.biases[l] = g;
    g = params.weights[l].transpose() * g;
  }
  out.input = g;
  return out;
}

// Column-per-example version of Forward used by the trainer.
struct BatchTrace {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<Eigen::MatrixXd> pre;
  Eigen::MatrixXd output;
};

BatchTrace ForwardBatch(const Eigen::MatrixXd& ys, const MlpParams& params) {
  BatchTrace t;
  Eigen::MatrixXd h = ys;
  const std::size_t n = params.num_layers();
  for (std::size_t l = 0; l < n; ++l) {
    t.inputs.push_back(h);
    Eigen::MatrixXd z = params.weights[l] * h;
    z.colwise() += params.biases[l];
    h = l + 1 < n ? Eigen::MatrixXd(z.array().tanh()) : z;
    t.pre.push_back(std::move(z));
  }
  t.output = std::move(h);
  return t;
}

void PutU32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void PutF64(std::ostream& os, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, sizeof v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t GetBytes(std::istream& is, int n) {
  unsigned char b[8] = {};
  if (!is.read(reinterpret_cast<char*>(b), n)) {
    throw Error(ErrorCode::kParseError, "truncated MLP file");
  }
  std::uint64_t v = 0;
  for (int i = n; i-- > 0;) v = (v << 8) | b[i];
  return v;
}

double GetF64(std::istream& is) {
  const std::uint64_t v = GetBytes(is, 8);
  double d;
  std::memcpy(&d, &v, sizeof d);
  return d;
}

}  // namespace

void MlpParams::Validate() const {
  if (dims.size() < 2 || dims.front() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "layer dims must start at 3");
  }
  if (weights.size() != dims.size() - 1 || biases.size() != weights.size()) {
    throw Error(ErrorCode::kInvalidArgument, "layer count mismatch");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (static_cast<std::size_t>(weights[l].rows()) != dims[l + 1] ||
        static_cast<std::size_t>(weights[l].cols()) != dims[l] ||
        static_cast<std::size_t>(biases[l].size()) != dims[l + 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "layer " + std::to_string(l) + " shape mismatch");
    }
    if (!weights[l].allFinite() || !biases[l].allFinite()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "layer " + std::to_string(l) + " has non-finite entries");
    }
  }
}

std::vector<std::size_t> DefaultEncoderDims() { return {3, 64, 256, 768}; }

MlpParams InitEncoder(std::span<const std::size_t> dims, std::uint64_t seed) {
  MlpParams p;
  p.dims.assign(dims.begin(), dims.end());
  if (p.dims.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one layer");
  }
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < p.dims.size(); ++l) {
    const auto rows = static_cast<Eigen::Index>(p.dims[l + 1]);
    const auto cols = static_cast<Eigen::Index>(p.dims[l]);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(rows, cols);
    if (l + 2 < p.dims.size()) {
      const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
      for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) w(i, j) = rng.Uniform(-limit, limit);
      }
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(rows));
  }
  p.Validate();
  return p;
}

EmotionEmbedding EncodeEmotion(const C2A2Point& y, const MlpParams& params) {
  EmotionEmbedding e = Forward(y, params).output;
  if (!e.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "encoder output overflowed");
  }
  return e;
}

TokenSequence Fuse(const TokenSequence& text, const EmotionEmbedding& e) {
  if (text.rows() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "text sequence is empty");
  }
  if (text.cols() != e.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "token width " + std::to_string(text.cols()) +
                    " != embedding size " + std::to_string(e.size()));
  }
  TokenSequence out(text.rows() + 1, text.cols());
  out.topRows(text.rows()) = text;
  out.row(text.rows()) = e.transpose();
  return out;
}

EncoderGradients EncoderBackward(const C2A2Point& y, const MlpParams& params,
                                 const Eigen::VectorXd& upstream) {
  if (upstream.size() != static_cast<Eigen::Index>(params.dims.back())) {
    throw Error(ErrorCode::kDimensionMismatch, "upstream gradient size");
  }
  return Backward(Forward(y, params), params, upstream);
}

TrainResult TrainToyRegression(std::span<const RegressionExample> dataset,
                               MlpParams params, std::size_t steps,
                               double learning_rate, std::uint64_t seed,
                               std::size_t batch_size) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty regression dataset");
  }
  params.Validate();
  const auto out_dim = static_cast<Eigen::Index>(params.dims.back());
  const auto n = static_cast<Eigen::Index>(dataset.size());
  Eigen::MatrixXd inputs(3, n);
  Eigen::MatrixXd targets(out_dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const RegressionExample& ex = dataset[static_cast<std::size_t>(i)];
    if (ex.target.size() != out_dim) {
      throw Error(ErrorCode::kDimensionMismatch, "target size");
    }
    inputs.col(i) = ex.y.vec();
    targets.col(i) = ex.target;
  }
  const double denom = static_cast<double>(n * out_dim);

  std::vector<Eigen::Index> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  const bool full_batch = batch_size == 0 || batch_size >= dataset.size();
  Rng rng(seed);
  std::size_t cursor = dataset.size();  // forces a shuffle on first use

  TrainResult result;
  result.loss_curve.reserve(steps + 1);
  for (std::size_t step = 0;; ++step) {
    BatchTrace full = ForwardBatch(inputs, params);
    const double loss = (full.output - targets).squaredNorm() / denom;
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergenceDetected,
                  "loss became non-finite at step " + std::to_string(step));
    }
    result.loss_curve.push_back(loss);
    if (step == steps) break;

    BatchTrace trace;
    Eigen::MatrixXd batch_targets;
    if (full_batch) {
      trace = std::move(full);
      batch_targets = targets;
    } else {
      Eigen::MatrixXd batch_inputs(3, static_cast<Eigen::Index>(batch_size));
      batch_targets.resize(out_dim, static_cast<Eigen::Index>(batch_size));
      for (Eigen::Index k = 0; k < batch_inputs.cols(); ++k) {
        if (cursor == dataset.size()) {
          for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.Index(i)]);
          }
          cursor = 0;
        }
        const Eigen::Index idx = order[cursor++];
        batch_inputs.col(k) = inputs.col(idx);
        batch_targets.col(k) = targets.col(idx);
      }
      trace = ForwardBatch(batch_inputs, params);
    }
    const double scale =
        2.0 / static_cast<double>(trace.output.cols() * out_dim);
    Eigen::MatrixXd g = scale * (trace.output - batch_targets);
    for (std::size_t l = params.num_layers(); l-- > 0;) {
      if (l + 1 < params.num_layers()) {
        const Eigen::ArrayXXd th = trace.pre[l].array().tanh();
        g = (g.array() * (1.0 - th * th)).matrix();
      }
      const Eigen::MatrixXd grad_w = g * trace.inputs[l].transpose();
      const Eigen::VectorXd grad_b = g.rowwise().sum();
      if (l > 0) g = params.weights[l].transpose() * g;
      params.weights[l] -= learning_rate * grad_w;
      params.biases[l] -= learning_rate * grad_b;
    }
  }
  result.params = std::move(params);
  return result;
}

std::vector<RegressionExample> ToyRegressionDataset(std::size_t n,
                                                    std::size_t dim,
                                                    std::uint64_t seed) {
  const std::vector<C2A2Point> ys =
      SampleConditions(SamplingMode::kAxisProximity3D, n, seed,
                       ReferenceFrame(), kDefaultJitterDeg);
  Rng rng(DeriveSeed(seed, {1}));
  Eigen::MatrixXd mix(static_cast<Eigen::Index>(dim), 3);
  for (Eigen::Index j = 0; j < 3; ++j) {
    for (Eigen::Index i = 0; i < mix.rows(); ++i) mix(i, j) = rng.Uniform(-1.0, 1.0);
  }
  std::vector<RegressionExample> out;
  out.reserve(n);
  for (const C2A2Point& y : ys) {
    out.push_back({y, (mix * y.vec()).array().tanh().matrix()});
  }
  return out;
}

void SaveMlp(const MlpParams& params, const std::filesystem::path& path) {
  params.Validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  os.write(kMagic, sizeof kMagic);
  PutU32(os, static_cast<std::uint32_t>(params.num_layers()));
  for (std::size_t d : params.dims) PutU32(os, static_cast<std::uint32_t>(d));
  for (std::size_t l = 0; l < params.num_layers(); ++l) {
    const Eigen::MatrixXd& w = params.weights[l];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) PutF64(os, w(i, j));
    }
    for (Eigen::Index i = 0; i < params.biases[l].size(); ++i) {
      PutF64(os, params.biases[l][i]);
    }
  }
  if (!os) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

MlpParams LoadMlp(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof magic) ||
      std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::kParseError, "bad MLP magic in " + path.string());
  }
  const auto layers = static_cast<std::size_t>(GetBytes(is, 4));
  if (layers == 0 || layers > 64) {
    throw Error(ErrorCode::kParseError, "implausible layer count");
  }
  MlpParams p;
  for (std::size_t i = 0; i <= layers; ++i) {
    const auto d = static_cast<std::size_t>(GetBytes(is, 4));
    if (d == 0 || d > (1u << 16)) {
      throw Error(ErrorCode::kParseError, "implausible layer width");
    }
    p.dims.push_back(d);
  }
  for (std::size_t l = 0; l < layers; ++l) {
    const auto rows = static_cast<Eigen::Index>(p.dims[l + 1]);
    const auto cols = static_cast<Eigen::Index>(p.dims[l]);
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = GetF64(is);
    }
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) b[i] = GetF64(is);
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kParseError, "trailing bytes in MLP file");
  }
  p.Validate();
  return p;
}

}  // namespace c2a2
