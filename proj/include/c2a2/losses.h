#ifndef C2A2_LOSSES_H_
#define C2A2_LOSSES_H_

#include <span>
#include <vector>

#include "c2a2/au_map.h"
#include "c2a2/emotion_space.h"

namespace c2a2 {

struct LossResult {
  double value = 0.0;
  std::vector<double> grad;  // same length as the prediction
};

// Squared L2 distance between the predicted AV coordinates and the label.
// `pred` holds (a, v) or (a, v, z); a 3D prediction is compared through its
// AV projection so the z gradient is zero.
LossResult AvLoss(std::span<const double> pred, const AVPoint& label);

// Symmetric Bernoulli KL, KL(p||q) + KL(q||p), summed over the AUs.
// Both vectors must have entries in [eps, 1 - eps]; the gradient is taken
// with respect to `pred`.
LossResult AuKlLoss(std::span<const double> pred,
                    std::span<const double> target);

// Builds Y = [A, V, z'] keeping the AV label and shrinking zhat so that the
// point stays in the unit ball. AV labels outside the unit disk are scaled
// radially onto the circle (and z' is then 0).
C2A2Point ComposeZLabel(const AVPoint& av, double zhat);

// Weighted batch objective; each term is the arithmetic mean over rows in
// input order.
struct BatchLoss {
  double av = 0.0;
  double au = 0.0;
  double total = 0.0;
  std::size_t n = 0;
};

struct BatchRow {
  std::vector<double> coord_pred;  // 2 or 3 entries
  AVPoint av_label;
  AUVector au_pred;
  AUVector au_target;
};

BatchLoss EvaluateBatch(std::span<const BatchRow> rows, double lambda_av = 1.0,
                        double lambda_au = 1.0);

}  // namespace c2a2

#endif  // C2A2_LOSSES_H_
