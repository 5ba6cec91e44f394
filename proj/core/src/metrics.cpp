#include "slackmax/metrics.hpp"

#include <bit>

namespace slackmax {

MetricsReport multilabel_metrics(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pred_gold,
    std::uint32_t d_labels) {
  MetricsReport r;
  if (pred_gold.empty() || d_labels == 0) {
    r.acc = 1.0;
    r.micro_f1 = 1.0;
    r.macro_f1 = 1.0;
    return r;
  }

  double jaccard_sum = 0.0;
  double hamming_sum = 0.0;
  std::uint64_t tp_total = 0, fp_total = 0, fn_total = 0;
  std::vector<std::uint64_t> tp(d_labels, 0), fp(d_labels, 0), fn(d_labels, 0);

  for (const auto& [pred, gold] : pred_gold) {
    const std::uint64_t inter = pred & gold;
    const std::uint64_t uni = pred | gold;
    jaccard_sum += uni == 0 ? 1.0
                            : static_cast<double>(std::popcount(inter)) /
                                  static_cast<double>(std::popcount(uni));
    hamming_sum += static_cast<double>(std::popcount(pred ^ gold));
    for (std::uint32_t j = 0; j < d_labels; ++j) {
      const bool p = (pred >> j) & 1;
      const bool g = (gold >> j) & 1;
      if (p && g) ++tp[j];
      if (p && !g) ++fp[j];
      if (!p && g) ++fn[j];
    }
  }
  for (std::uint32_t j = 0; j < d_labels; ++j) {
    tp_total += tp[j];
    fp_total += fp[j];
    fn_total += fn[j];
  }

  const double n = static_cast<double>(pred_gold.size());
  r.acc = jaccard_sum / n;
  r.label_loss = hamming_sum / (n * static_cast<double>(d_labels));

  const double micro_denom =
      static_cast<double>(2 * tp_total + fp_total + fn_total);
  r.micro_f1 = micro_denom == 0.0
                   ? 1.0
                   : 2.0 * static_cast<double>(tp_total) / micro_denom;

  double macro_sum = 0.0;
  for (std::uint32_t j = 0; j < d_labels; ++j) {
    const double denom = static_cast<double>(2 * tp[j] + fp[j] + fn[j]);
    macro_sum += denom == 0.0 ? 1.0 : 2.0 * static_cast<double>(tp[j]) / denom;
  }
  r.macro_f1 = macro_sum / static_cast<double>(d_labels);
  return r;
}

MetricsReport evaluate(const ModelState& model, const MultilabelAdapter& task) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  pairs.reserve(task.num_examples());
  for (std::size_t i = 0; i < task.num_examples(); ++i) {
    pairs.emplace_back(task.predict(model, i), task.gold_label(i));
  }
  return multilabel_metrics(pairs, task.dataset().d_labels);
}

}  // namespace slackmax
