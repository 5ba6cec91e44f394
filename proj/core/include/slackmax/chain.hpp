#pragma once

#include <memory>
#include <vector>

#include "slackmax/model.hpp"

namespace slackmax {

struct ChainExample {
  std::vector<std::vector<double>> obs;  // T x d_obs dense observations
  std::vector<int> tags;                 // gold tags, length T
};

struct ChainDataset {
  std::vector<ChainExample> examples;
  int num_states = 0;
  int d_obs = 0;
};

// Linear-chain backend: unary + transition scores, per-position Hamming
// loss. The lambda-oracle is Viterbi with lambda added to every non-gold
// tag. Labels are tag sequences encoded base-k (position 0 least
// significant). Slope constraints are not decomposable and raise
// UnsupportedConstraint.
class ChainInstance final : public ProblemInstance {
 public:
  ChainInstance(std::vector<std::vector<double>> unary,
                std::vector<std::vector<double>> transition,
                std::vector<int> gold_tags);

  OracleAnswer lambda_oracle(double lambda, bool exclude_zero_loss) const override;
  std::optional<std::uint64_t> label_count() const override;

  LabelPoint point_of(LabelId id) const;
  LabelId encode(const std::vector<int>& tags) const;
  std::vector<int> decode(LabelId id) const;
  LabelId gold() const { return encode(gold_); }

  int length() const { return static_cast<int>(unary_.size()); }
  int num_states() const { return static_cast<int>(unary_.front().size()); }

  // Exact enumeration over all k^T sequences; only viable at desk scale.
  std::unique_ptr<EnumerationInstance> materialize() const;

 private:
  double sequence_score(const std::vector<int>& tags) const;

  std::vector<std::vector<double>> unary_;       // T x k
  std::vector<std::vector<double>> transition_;  // k x k
  std::vector<int> gold_;
  double gold_score_;
};

class ChainAdapter final : public TaskAdapter {
 public:
  explicit ChainAdapter(ChainDataset dataset);

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

  const ChainDataset& dataset() const { return dataset_; }
  ChainInstance build_chain(const ModelState& model, std::size_t example) const;

 private:
  ChainDataset dataset_;
};

// Synthetic tagging data from a random HMM-style generator.
ChainDataset synthetic_chain(std::size_t n, int length, int num_states,
                             int d_obs, std::uint64_t seed);

}  // namespace slackmax
