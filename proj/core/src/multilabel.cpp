#include "slackmax/multilabel.hpp"

#include <algorithm>
#include <stdexcept>

namespace slackmax {

MultilabelInstance::MultilabelInstance(std::vector<double> scores,
                                       std::uint64_t gold,
                                       std::vector<double> loss_weights)
    : scores_(std::move(scores)),
      gold_(gold),
      loss_weights_(std::move(loss_weights)) {
  if (scores_.empty() || scores_.size() > 24) {
    throw std::invalid_argument("d_labels must be in [1, 24]");
  }
  if (loss_weights_.empty()) loss_weights_.assign(scores_.size(), 1.0);
  if (loss_weights_.size() != scores_.size()) {
    throw std::invalid_argument("loss weight per label required");
  }
  gold_score_ = 0.0;
  for (std::size_t j = 0; j < scores_.size(); ++j) {
    if (gold_ >> j & 1) gold_score_ += scores_[j];
  }
}

LabelPoint MultilabelInstance::point_of(LabelId mask) const {
  double f = 0.0, g = 0.0;
  for (std::size_t j = 0; j < scores_.size(); ++j) {
    const bool bit = mask >> j & 1;
    if (bit) f += scores_[j];
    if (bit != bool(gold_ >> j & 1)) g += loss_weights_[j];
  }
  return LabelPoint{1.0 + f - gold_score_, g};
}

OracleAnswer MultilabelInstance::lambda_oracle(double lambda,
                                               bool exclude_zero_loss) const {
  const std::size_t d = scores_.size();
  std::uint64_t mask = 0;
  // Per bit, flipping away from gold gains (1-2*gold_j)*s_j + lambda*w_j.
  // Ties keep the bit at 0 so the returned id is minimal.
  std::vector<double> flip_gain(d);
  for (std::size_t j = 0; j < d; ++j) {
    const bool gj = gold_ >> j & 1;
    flip_gain[j] = (gj ? -scores_[j] : scores_[j]) + lambda * loss_weights_[j];
    bool bit = gj;
    if (flip_gain[j] > 0.0 || (flip_gain[j] == 0.0 && gj)) bit = !gj;
    if (bit) mask |= std::uint64_t{1} << j;
  }
  if (exclude_zero_loss && mask == gold_) {
    // Cheapest single flip; ties resolved toward the smallest mask.
    std::size_t best = 0;
    std::uint64_t best_mask = gold_ ^ 1;
    for (std::size_t j = 1; j < d; ++j) {
      const std::uint64_t m = gold_ ^ (std::uint64_t{1} << j);
      if (flip_gain[j] > flip_gain[best] ||
          (flip_gain[j] == flip_gain[best] && m < best_mask)) {
        best = j;
        best_mask = m;
      }
    }
    mask = best_mask;
  }
  return OracleAnswer{mask, point_of(mask)};
}

std::unique_ptr<EnumerationInstance> MultilabelInstance::materialize() const {
  const std::uint64_t M = std::uint64_t{1} << scores_.size();
  std::vector<LabelPoint> pts;
  pts.reserve(M);
  for (std::uint64_t m = 0; m < M; ++m) pts.push_back(point_of(m));
  return enumeration_backend(std::move(pts), gold_);
}

MultilabelAdapter::MultilabelAdapter(MultiLabelDataset dataset,
                                     std::vector<double> loss_weights)
    : dataset_(std::move(dataset)), loss_weights_(std::move(loss_weights)) {
  if (loss_weights_.empty()) loss_weights_.assign(dataset_.d_labels, 1.0);
  if (loss_weights_.size() != dataset_.d_labels) {
    throw std::invalid_argument("loss weight per label required");
  }
}

std::size_t MultilabelAdapter::feature_dim() const {
  return std::size_t{dataset_.d_features} * dataset_.d_labels;
}

std::vector<double> MultilabelAdapter::bit_scores(const ModelState& model,
                                                  std::size_t example) const {
  const auto& ex = dataset_.examples.at(example);
  std::vector<double> s(dataset_.d_labels, 0.0);
  for (std::uint32_t j = 0; j < dataset_.d_labels; ++j) {
    const std::size_t base = std::size_t{j} * dataset_.d_features;
    for (const auto& [idx, val] : ex.features) s[j] += model.w[base + idx] * val;
  }
  return s;
}

std::unique_ptr<ProblemInstance> MultilabelAdapter::make_instance(
    const ModelState& model, std::size_t example, BackendKind kind) const {
  MultilabelInstance inst(bit_scores(model, example),
                          dataset_.examples.at(example).labels, loss_weights_);
  if (kind == BackendKind::Enumerate) return inst.materialize();
  return std::make_unique<MultilabelInstance>(std::move(inst));
}

void MultilabelAdapter::add_feature_diff(std::size_t example, LabelId y,
                                         double scale,
                                         std::vector<double>& out) const {
  const auto& ex = dataset_.examples.at(example);
  for (std::uint32_t j = 0; j < dataset_.d_labels; ++j) {
    const bool yj = y >> j & 1;
    const bool gj = ex.labels >> j & 1;
    if (yj == gj) continue;
    const double sign = yj ? 1.0 : -1.0;
    const std::size_t base = std::size_t{j} * dataset_.d_features;
    for (const auto& [idx, val] : ex.features) {
      out[base + idx] += scale * sign * val;
    }
  }
}

double MultilabelAdapter::loss(std::size_t example, LabelId y) const {
  const auto& ex = dataset_.examples.at(example);
  double g = 0.0;
  for (std::uint32_t j = 0; j < dataset_.d_labels; ++j) {
    if ((y >> j & 1) != (ex.labels >> j & 1)) g += loss_weights_[j];
  }
  return g;
}

LabelId MultilabelAdapter::gold_label(std::size_t example) const {
  return dataset_.examples.at(example).labels;
}

LabelId MultilabelAdapter::predict(const ModelState& model,
                                   std::size_t example) const {
  const auto s = bit_scores(model, example);
  std::uint64_t mask = 0;
  for (std::uint32_t j = 0; j < dataset_.d_labels; ++j) {
    if (s[j] > 0.0) mask |= std::uint64_t{1} << j;
  }
  return mask;
}

std::vector<double> taxonomy_loss_weights(const std::vector<int>& parent) {
  const std::size_t d = parent.size();
  std::vector<double> weight(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    int p = parent[j];
    std::size_t guard = 0;
    while (p >= 0 && guard++ < d) {
      weight[static_cast<std::size_t>(p)] += 1.0;
      p = parent[static_cast<std::size_t>(p)];
    }
  }
  return weight;
}

}  // namespace slackmax
