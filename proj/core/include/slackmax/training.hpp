#pragma once

#include <cstdint>
#include <vector>

#include "slackmax/model.hpp"
#include "slackmax/search.hpp"

namespace slackmax {

// Which unconstrained surrogate a subgradient step minimizes: the
// multiplicative (slack-rescaled) hinge max_y g*(h) or the additive
// (margin-rescaled) hinge max_y (g + h - 1).
enum class StepKind { Slack, Margin };

struct StepOutcome {
  bool violated = false;  // hinge was active, weight update applied
  double hinge = 0.0;     // value of the per-example hinge term
  int queries = 0;        // oracle calls spent by the search
};

// One stochastic subgradient step on example `ex`:
// w <- (1 - step*C)*w - step*subgradient.  For the slack form the
// subgradient is g(yhat)*(phi(yhat)-phi(gold)); for the margin form it is
// the bare feature difference. xi feeds the Sarawagi baseline only.
StepOutcome subgradient_step(StepKind kind, ModelState& model,
                             const TaskAdapter& task, std::size_t ex,
                             SearchKind search, BackendKind backend,
                             const SearchConfig& scfg, double step,
                             double xi = 0.0);

struct EpochRecord {
  int epoch = 0;
  double objective = 0.0;      // C/2 ||w||^2 + mean hinge, end of epoch
  std::int64_t queries = 0;    // cumulative oracle calls
  double seconds = 0.0;        // wall time since training start
};

struct SgdConfig {
  StepKind step_kind = StepKind::Slack;
  SearchKind search = SearchKind::Bisecting;
  BackendKind backend = BackendKind::Auto;
  SearchConfig search_cfg;
  int epochs = 10;
  double t0 = 10.0;  // step_t = 1 / (C * (t + t0))
  std::uint64_t seed = 1;
};

struct SgdResult {
  ModelState model;
  std::vector<EpochRecord> history;
};

// Shuffled per-epoch passes of subgradient_step with the 1/(C(t+t0))
// schedule; records the full regularized objective at every epoch end.
SgdResult sgd_train(ModelState model, const TaskAdapter& task,
                    const SgdConfig& cfg);

// Exact per-example hinge value under the current weights; falls back to
// the given search when the label space cannot be enumerated.
double example_hinge(StepKind kind, const ModelState& model,
                     const TaskAdapter& task, std::size_t ex,
                     SearchKind search, const SearchConfig& scfg,
                     std::int64_t* queries = nullptr);

// One cached cutting-plane constraint xi_i >= loss + w . dphi.
struct Constraint {
  LabelId y = 0;
  std::vector<double> dphi;  // phi(x, y) - phi(x, gold)
  double loss = 0.0;
  double alpha = 0.0;  // dual variable
};

struct WorkingSet {
  std::vector<std::vector<Constraint>> per_example;
  std::vector<double> xi;

  std::size_t total_constraints() const;
};

struct CuttingPlaneConfig {
  SearchKind search = SearchKind::Angular;
  BackendKind backend = BackendKind::Auto;
  SearchConfig search_cfg;
  double eps = 1e-4;     // violation slack for adding a constraint
  int max_rounds = 100;
  int threads = 1;       // parallelism for the search phase only
};

struct RoundRecord {
  int round = 0;
  double objective = 0.0;     // working-set primal C/2||w||^2 + mean xi
  int added = 0;              // constraints added this round
  double success_rate = 0.0;  // fraction of searches exceeding xi + eps
  double mean_queries = 0.0;
};

struct CuttingPlaneResult {
  ModelState model;
  WorkingSet working_set;
  std::vector<RoundRecord> history;
};

// Constraint generation with a cyclic dual coordinate-ascent QP re-solve
// (per-example box sum_y alpha_iy <= 1/n) after each round; stops when a
// round adds nothing or max_rounds is hit.
CuttingPlaneResult cutting_plane_train(ModelState model,
                                       const TaskAdapter& task,
                                       const CuttingPlaneConfig& cfg);

}  // namespace slackmax
