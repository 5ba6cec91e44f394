#pragma once

#include <cstdint>
#include <vector>

#include "slackmax/multilabel.hpp"

namespace slackmax {

struct MetricsReport {
  double acc = 0.0;         // mean Jaccard |pred & gold| / |pred | gold|
  double label_loss = 0.0;  // mean Hamming distance / d_labels
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

// Metrics over (predicted mask, gold mask) pairs. Conventions: an example
// with both masks empty scores Jaccard 1; a label with no positives in
// either predictions or gold scores per-label F1 of 1.
MetricsReport multilabel_metrics(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pred_gold,
    std::uint32_t d_labels);

// Score-argmax predictions for every example, then multilabel_metrics.
MetricsReport evaluate(const ModelState& model, const MultilabelAdapter& task);

}  // namespace slackmax
