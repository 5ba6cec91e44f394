#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "slackmax/oracle.hpp"

namespace slackmax {

// Linear structured model: scores are f(y) = w . phi(x, y) with the joint
// feature map and loss supplied by a TaskAdapter.
struct ModelState {
  std::vector<double> w;
  double C = 1.0;  // regularization
};

// Which instance representation make_instance should build.
enum class BackendKind {
  Auto,         // factorized/Viterbi when available, else enumeration
  Enumerate,    // materialize every label (supports constrained queries)
  Factorized,   // structured oracle, lambda queries only
};

// Task family glue: owns the training examples and defines the joint
// feature map phi(x, y), the loss, and how to build a ProblemInstance
// (the (h, g) label space) for one example under the current weights.
class TaskAdapter {
 public:
  virtual ~TaskAdapter() = default;

  virtual std::size_t feature_dim() const = 0;
  virtual std::size_t num_examples() const = 0;

  virtual std::unique_ptr<ProblemInstance> make_instance(
      const ModelState& model, std::size_t example,
      BackendKind kind = BackendKind::Auto) const = 0;

  // out += scale * (phi(x, y) - phi(x, y_gold))
  virtual void add_feature_diff(std::size_t example, LabelId y, double scale,
                                std::vector<double>& out) const = 0;

  virtual double loss(std::size_t example, LabelId y) const = 0;

  virtual LabelId gold_label(std::size_t example) const = 0;

  // Score argmax (no loss augmentation).
  virtual LabelId predict(const ModelState& model, std::size_t example) const = 0;
};

}  // namespace slackmax
