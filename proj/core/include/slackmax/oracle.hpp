#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slackmax/geometry.hpp"

namespace slackmax {

// Opaque label identifier. Enumeration backends use the point index,
// the multi-label backend a bit mask, the chain backend a base-k encoded
// tag sequence. Ties in every argmax are broken toward the smallest id.
using LabelId = std::uint64_t;

// Which boundary of the slope wedge is open. AlphaStrict admits
// beta <= slope < alpha, BetaStrict admits beta < slope <= alpha.
// Toggling the flag between the two children of a split guarantees a
// label returned on a wedge boundary is never returned again.
enum class StrictSide { AlphaStrict, BetaStrict };

struct OracleQuery {
  double lambda = 1.0;
  double alpha = kInf;  // upper slope bound
  double beta = 0.0;    // lower slope bound
  StrictSide strict_side = StrictSide::BetaStrict;
  bool exclude_zero_loss = false;  // exclude the ground-truth label
};

struct OracleAnswer {
  std::optional<LabelId> label;  // absent: the feasible region is empty
  LabelPoint point;
};

// Whether a label with the given slope is admitted by the wedge.
// Labels with h <= 0 carry slope +inf and are admissible only when the
// wedge is unbounded above.
inline bool wedge_admits(double slope, double alpha, double beta, StrictSide s) {
  if (std::isinf(slope)) return std::isinf(alpha);
  if (s == StrictSide::AlphaStrict) return beta <= slope && slope < alpha;
  return beta < slope && slope <= alpha;
}

// Raised by backends that cannot honor slope constraints (factorized
// multi-label, chain Viterbi). Callers fall back to enumeration or
// refuse angular search.
struct UnsupportedConstraint : std::runtime_error {
  explicit UnsupportedConstraint(const std::string& what)
      : std::runtime_error(what) {}
};

// A label space reachable through (constrained) lambda-oracle calls.
// Instances are immutable after construction; oracle calls are read-only.
class ProblemInstance {
 public:
  virtual ~ProblemInstance() = default;

  // argmax over labels of h + lambda*g.
  virtual OracleAnswer lambda_oracle(double lambda,
                                     bool exclude_zero_loss = false) const = 0;

  // argmax of h + lambda*g restricted to the query's slope wedge.
  // Backends without constraint support throw UnsupportedConstraint.
  virtual OracleAnswer constrained_lambda_oracle(const OracleQuery& q) const {
    (void)q;
    throw UnsupportedConstraint("backend does not support slope constraints");
  }

  virtual bool supports_constraints() const { return false; }

  // Number of labels, or nullopt for spaces only reachable implicitly.
  virtual std::optional<std::uint64_t> label_count() const { return std::nullopt; }
};

// Reference backend: an explicit list of (h, g) points searched by exact
// linear scans. Supports constrained queries.
class EnumerationInstance final : public ProblemInstance {
 public:
  explicit EnumerationInstance(std::vector<LabelPoint> points,
                               std::optional<LabelId> gold = std::nullopt);

  OracleAnswer lambda_oracle(double lambda, bool exclude_zero_loss) const override;
  OracleAnswer constrained_lambda_oracle(const OracleQuery& q) const override;
  bool supports_constraints() const override { return true; }
  std::optional<std::uint64_t> label_count() const override {
    return points_.size();
  }

  const std::vector<LabelPoint>& points() const { return points_; }
  const LabelPoint& point_of(LabelId id) const { return points_.at(id); }
  std::optional<LabelId> gold() const { return gold_; }

 private:
  std::vector<LabelPoint> points_;
  std::optional<LabelId> gold_;
};

std::unique_ptr<EnumerationInstance> enumeration_backend(
    std::vector<LabelPoint> points, std::optional<LabelId> gold = std::nullopt);

}  // namespace slackmax
