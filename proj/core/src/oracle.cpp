#include "slackmax/oracle.hpp"

namespace slackmax {

EnumerationInstance::EnumerationInstance(std::vector<LabelPoint> points,
                                         std::optional<LabelId> gold)
    : points_(std::move(points)), gold_(gold) {
  if (points_.empty()) {
    throw std::invalid_argument("enumeration instance needs at least one label");
  }
}

OracleAnswer EnumerationInstance::lambda_oracle(double lambda,
                                                bool exclude_zero_loss) const {
  OracleAnswer best;
  double best_score = -kInf;
  for (LabelId id = 0; id < points_.size(); ++id) {
    if (exclude_zero_loss && gold_ && id == *gold_) continue;
    const double s = lambda_score(points_[id], lambda);
    if (s > best_score) {
      best_score = s;
      best.label = id;
      best.point = points_[id];
    }
  }
  return best;
}

OracleAnswer EnumerationInstance::constrained_lambda_oracle(
    const OracleQuery& q) const {
  if (q.alpha < q.beta) {
    throw std::invalid_argument("constrained oracle requires alpha >= beta");
  }
  OracleAnswer best;
  double best_score = -kInf;
  for (LabelId id = 0; id < points_.size(); ++id) {
    if (q.exclude_zero_loss && gold_ && id == *gold_) continue;
    const LabelPoint& p = points_[id];
    if (!wedge_admits(slope_of(p), q.alpha, q.beta, q.strict_side)) continue;
    const double s = lambda_score(p, q.lambda);
    if (s > best_score) {
      best_score = s;
      best.label = id;
      best.point = p;
    }
  }
  return best;
}

std::unique_ptr<EnumerationInstance> enumeration_backend(
    std::vector<LabelPoint> points, std::optional<LabelId> gold) {
  return std::make_unique<EnumerationInstance>(std::move(points), gold);
}

}  // namespace slackmax
