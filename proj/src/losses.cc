#include "c2a2/losses.h"

#include <algorithm>
#include <cmath>

#include "c2a2/error.h"

namespace c2a2 {
namespace {

void CheckProb(double p, const char* what) {
  if (!(p >= kProbEpsilon && p <= 1.0 - kProbEpsilon)) {
    throw Error(ErrorCode::kRangeViolation,
                std::string(what) + " probability " + FormatDouble(p) +
                    " outside [eps, 1 - eps]");
  }
}

double BernoulliKl(double p, double q) {
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

}  // namespace

LossResult AvLoss(std::span<const double> pred, const AVPoint& label) {
  if (pred.size() != 2 && pred.size() != 3) {
    throw Error(ErrorCode::kDimensionMismatch,
                "coordinate prediction must have 2 or 3 entries, got " +
                    std::to_string(pred.size()));
  }
  for (double x : pred) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kNonFinite, "coordinate prediction");
    }
  }
  const double da = pred[0] - label.valence;
  const double dv = pred[1] - label.arousal;
  LossResult out;
  out.value = da * da + dv * dv;
  out.grad.assign(pred.size(), 0.0);
  out.grad[0] = 2.0 * da;
  out.grad[1] = 2.0 * dv;
  return out;
}

LossResult AuKlLoss(std::span<const double> pred,
                    std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "AU prediction/target length mismatch");
  }
  LossResult out;
  out.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = pred[i];
    const double q = target[i];
    CheckProb(p, "predicted");
    CheckProb(q, "target");
    out.value += BernoulliKl(p, q) + BernoulliKl(q, p);
    // d/dp KL(p||q) = log(p/q) - log((1-p)/(1-q));
    // d/dp KL(q||p) = (1-q)/(1-p) - q/p.
    out.grad[i] = std::log(p / q) - std::log((1.0 - p) / (1.0 - q)) +
                  (1.0 - q) / (1.0 - p) - q / p;
  }
  return out;
}

C2A2Point ComposeZLabel(const AVPoint& av, double zhat) {
  av.Validate();
  if (!std::isfinite(zhat)) throw Error(ErrorCode::kNonFinite, "zhat");
  double a = av.valence;
  double v = av.arousal;
  const double r2 = a * a + v * v;
  if (r2 > 1.0 + kBallTolerance) {
    const double r = std::sqrt(r2);
    a /= r;
    v /= r;
    return {a, v, 0.0};
  }
  const double cap = std::sqrt(std::max(0.0, 1.0 - r2));
  const double z = std::copysign(std::min(std::abs(zhat), cap), zhat);
  return {a, v, z == 0.0 ? 0.0 : z};
}

BatchLoss EvaluateBatch(std::span<const BatchRow> rows, double lambda_av,
                        double lambda_au) {
  BatchLoss out;
  out.n = rows.size();
  if (rows.empty()) return out;
  for (const BatchRow& row : rows) {
    out.av += AvLoss(row.coord_pred, row.av_label).value;
    out.au += AuKlLoss(row.au_pred, row.au_target).value;
  }
  out.av /= static_cast<double>(rows.size());
  out.au /= static_cast<double>(rows.size());
  out.total = lambda_av * out.av + lambda_au * out.au;
  return out;
}

}  // namespace c2a2
