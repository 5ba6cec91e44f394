#pragma once

#include <memory>
#include <vector>

#include "slackmax/dataset.hpp"
#include "slackmax/model.hpp"

namespace slackmax {

// Factorized multi-label backend: independent labels (no pairwise
// potentials), so h + lambda*g decomposes per bit and the lambda-oracle
// runs in O(d_labels). The label id is the bit mask itself.
//
// Slope-constrained queries are not decomposable and raise
// UnsupportedConstraint; use materialize() when exact search is needed.
class MultilabelInstance final : public ProblemInstance {
 public:
  // scores[j] = w_j . x, loss_weights[j] = contribution of a flipped bit j
  // to g (plain Hamming when all 1).
  MultilabelInstance(std::vector<double> scores, std::uint64_t gold,
                     std::vector<double> loss_weights = {});

  OracleAnswer lambda_oracle(double lambda, bool exclude_zero_loss) const override;
  std::optional<std::uint64_t> label_count() const override {
    return std::uint64_t{1} << scores_.size();
  }

  LabelPoint point_of(LabelId mask) const;
  std::uint64_t gold() const { return gold_; }
  std::uint32_t d_labels() const { return static_cast<std::uint32_t>(scores_.size()); }

  // Exact enumeration over all 2^d masks; mask m becomes point index m.
  std::unique_ptr<EnumerationInstance> materialize() const;

 private:
  std::vector<double> scores_;
  std::uint64_t gold_;
  std::vector<double> loss_weights_;
  double gold_score_;  // f(y_gold)
};

// Multi-label task: phi(x, y) stacks one copy of x per positive label,
// f(y) = sum_j y_j (w_j . x). Loss is (optionally weighted) Hamming.
class MultilabelAdapter final : public TaskAdapter {
 public:
  explicit MultilabelAdapter(MultiLabelDataset dataset,
                             std::vector<double> loss_weights = {});

  std::size_t feature_dim() const override;
  std::size_t num_examples() const override { return dataset_.examples.size(); }

  std::unique_ptr<ProblemInstance> make_instance(
      const ModelState& model, std::size_t example,
      BackendKind kind) const override;

  void add_feature_diff(std::size_t example, LabelId y, double scale,
                        std::vector<double>& out) const override;
  double loss(std::size_t example, LabelId y) const override;
  LabelId gold_label(std::size_t example) const override;
  LabelId predict(const ModelState& model, std::size_t example) const override;

  const MultiLabelDataset& dataset() const { return dataset_; }

  std::vector<double> bit_scores(const ModelState& model,
                                 std::size_t example) const;

 private:
  MultiLabelDataset dataset_;
  std::vector<double> loss_weights_;
};

// Loss weights from a taxonomy parent list: weight of a node is
// 1 + number of descendants, so mistakes high in the hierarchy cost more.
std::vector<double> taxonomy_loss_weights(const std::vector<int>& parent);

}  // namespace slackmax
