#include "slackmax/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace slackmax {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double squared_norm(const std::vector<double>& a) { return dot(a, a); }

// Angular search needs constrained queries; when the caller leaves the
// backend choice open, force enumeration for it.
BackendKind resolve_backend(BackendKind bk, SearchKind search) {
  if (bk == BackendKind::Auto && search == SearchKind::Angular) {
    return BackendKind::Enumerate;
  }
  return bk;
}

constexpr std::size_t kEnumHingeCap = std::size_t{1} << 16;

}  // namespace

StepOutcome subgradient_step(StepKind kind, ModelState& model,
                             const TaskAdapter& task, std::size_t ex,
                             SearchKind search, BackendKind backend,
                             const SearchConfig& scfg, double step,
                             double xi) {
  StepOutcome out;
  std::optional<LabelId> yhat;
  double grad_scale = 0.0;

  if (kind == StepKind::Margin) {
    const auto inst = task.make_instance(model, ex, backend);
    const OracleAnswer ans = inst->lambda_oracle(1.0, false);
    out.queries = 1;
    if (ans.label) {
      // g + h - 1 = L(y) + f(y) - f(gold); the gold label contributes 0.
      out.hinge = std::max(0.0, lambda_score(ans.point, 1.0) - 1.0);
      if (out.hinge > 0.0 && *ans.label != task.gold_label(ex)) {
        yhat = ans.label;
        grad_scale = 1.0;
      }
    }
  } else {
    const auto inst =
        task.make_instance(model, ex, resolve_backend(backend, search));
    const SearchOutcome so = run_search(search, *inst, xi, scfg);
    out.queries = so.queries;
    out.hinge = so.best_phi;
    if (so.best_label && so.best_phi > 0.0) {
      yhat = so.best_label;
      grad_scale = so.best_point.g;
    }
  }

  const double shrink = 1.0 - step * model.C;
  for (double& w : model.w) w *= shrink;
  if (yhat) {
    out.violated = true;
    task.add_feature_diff(ex, *yhat, -step * grad_scale, model.w);
  }
  return out;
}

double example_hinge(StepKind kind, const ModelState& model,
                     const TaskAdapter& task, std::size_t ex,
                     SearchKind search, const SearchConfig& scfg,
                     std::int64_t* queries) {
  if (kind == StepKind::Margin) {
    const auto inst = task.make_instance(model, ex, BackendKind::Auto);
    const OracleAnswer ans = inst->lambda_oracle(1.0, false);
    if (queries) *queries += 1;
    if (!ans.label) return 0.0;
    return std::max(0.0, lambda_score(ans.point, 1.0) - 1.0);
  }

  // Exact slack hinge via a full scan when the label space is small.
  try {
    const auto inst = task.make_instance(model, ex, BackendKind::Enumerate);
    const auto* e = dynamic_cast<const EnumerationInstance*>(inst.get());
    if (e && e->points().size() <= kEnumHingeCap) {
      double best = 0.0;
      for (const LabelPoint& p : e->points()) best = std::max(best, phi(p));
      if (queries) *queries += 1;
      return best;
    }
  } catch (const std::exception&) {
    // label space too large to materialize; fall through to search
  }
  const auto inst =
      task.make_instance(model, ex, resolve_backend(BackendKind::Auto, search));
  const SearchOutcome so = run_search(search, *inst, 0.0, scfg);
  if (queries) *queries += so.queries;
  return std::max(0.0, so.best_phi);
}

SgdResult sgd_train(ModelState model, const TaskAdapter& task,
                    const SgdConfig& cfg) {
  SgdResult res;
  res.model = std::move(model);
  const std::size_t n = task.num_examples();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> xi_est(n, 0.0);
  std::mt19937_64 rng(cfg.seed);

  std::int64_t cum_queries = 0;
  long step_index = 0;
  const auto t_start = std::chrono::steady_clock::now();

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const double step =
          1.0 / (res.model.C * (static_cast<double>(step_index) + cfg.t0));
      ++step_index;
      const StepOutcome so =
          subgradient_step(cfg.step_kind, res.model, task, i, cfg.search,
                           cfg.backend, cfg.search_cfg, step, xi_est[i]);
      xi_est[i] = so.hinge;
      cum_queries += so.queries;
    }

    double hinge_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      hinge_sum += example_hinge(cfg.step_kind, res.model, task, i, cfg.search,
                                 cfg.search_cfg, &cum_queries);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.objective = 0.5 * res.model.C * squared_norm(res.model.w) +
                    (n > 0 ? hinge_sum / static_cast<double>(n) : 0.0);
    rec.queries = cum_queries;
    rec.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
    res.history.push_back(rec);
  }
  return res;
}

std::size_t WorkingSet::total_constraints() const {
  std::size_t t = 0;
  for (const auto& v : per_example) t += v.size();
  return t;
}

namespace {

// Maximize sum alpha*loss - 1/(2C) ||sum alpha dphi||^2 subject to
// alpha >= 0 and sum_y alpha_iy <= 1/n, by cyclic coordinate ascent.
// Rebuilds w = -(1/C) sum alpha dphi and the working-set slacks.
void solve_working_set(ModelState& model, WorkingSet& ws) {
  const std::size_t n = ws.per_example.size();
  const double C = model.C;
  const double box = 1.0 / static_cast<double>(n);

  std::fill(model.w.begin(), model.w.end(), 0.0);
  for (auto& cons : ws.per_example) {
    for (Constraint& c : cons) {
      if (c.alpha == 0.0) continue;
      const double s = -c.alpha / C;
      for (std::size_t k = 0; k < c.dphi.size(); ++k) model.w[k] += s * c.dphi[k];
    }
  }

  constexpr int kMaxPasses = 10000;
  constexpr double kTol = 1e-8;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    // Stop on the KKT residual (projected gradient), not the alpha step
    // size: near the optimum with small C the Newton steps in alpha become
    // tiny long before the gradient does.
    double max_viol = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum_i = 0.0;
      for (const Constraint& c : ws.per_example[i]) sum_i += c.alpha;
      for (Constraint& c : ws.per_example[i]) {
        const double grad = c.loss + dot(model.w, c.dphi);
        const double qii = dot(c.dphi, c.dphi) / C;
        double target;
        if (qii > 0.0) {
          target = c.alpha + grad / qii;
        } else {
          // dphi == 0: the dual is linear in this alpha
          target = grad > 0.0 ? kInf : 0.0;
        }
        const double upper = c.alpha + (box - sum_i);
        const double na = std::clamp(target, 0.0, upper);
        const double d = na - c.alpha;
        double viol = grad;
        if (c.alpha <= 0.0 && grad < 0.0) viol = 0.0;
        if (na >= upper && grad > 0.0) viol = 0.0;
        max_viol = std::max(max_viol, std::abs(viol));
        if (d != 0.0) {
          const double s = -d / C;
          for (std::size_t k = 0; k < c.dphi.size(); ++k) {
            model.w[k] += s * c.dphi[k];
          }
          c.alpha = na;
          sum_i += d;
        }
      }
    }
    if (max_viol < kTol) break;
  }

  for (std::size_t i = 0; i < n; ++i) {
    double xi = 0.0;
    for (const Constraint& c : ws.per_example[i]) {
      xi = std::max(xi, c.loss + dot(model.w, c.dphi));
    }
    ws.xi[i] = xi;
  }
}

}  // namespace

CuttingPlaneResult cutting_plane_train(ModelState model,
                                       const TaskAdapter& task,
                                       const CuttingPlaneConfig& cfg) {
  CuttingPlaneResult res;
  res.model = std::move(model);
  const std::size_t n = task.num_examples();
  res.working_set.per_example.resize(n);
  res.working_set.xi.assign(n, 0.0);
  if (n == 0) return res;

  const BackendKind bk = resolve_backend(cfg.backend, cfg.search);

  struct Found {
    bool violated = false;
    LabelId y = 0;
    double phi_hat = 0.0;
    int queries = 0;
  };

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    std::vector<Found> found(n);
    auto scan = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const auto inst = task.make_instance(res.model, i, bk);
        const SearchOutcome so =
            run_search(cfg.search, *inst, res.working_set.xi[i], cfg.search_cfg);
        Found f;
        f.queries = so.queries;
        if (so.best_label &&
            so.best_phi > res.working_set.xi[i] + cfg.eps) {
          f.violated = true;
          f.y = *so.best_label;
          f.phi_hat = so.best_phi;
        }
        found[i] = f;
      }
    };
    if (cfg.threads > 1 && n > 1) {
      const std::size_t workers =
          std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), n);
      std::vector<std::thread> pool;
      const std::size_t chunk = (n + workers - 1) / workers;
      for (std::size_t t = 0; t < workers; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo < hi) pool.emplace_back(scan, lo, hi);
      }
      for (auto& th : pool) th.join();
    } else {
      scan(0, n);
    }

    int added = 0;
    int violated = 0;
    double queries = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      queries += found[i].queries;
      if (!found[i].violated) continue;
      ++violated;
      auto& cons = res.working_set.per_example[i];
      const bool dup = std::any_of(cons.begin(), cons.end(),
                                   [&](const Constraint& c) {
                                     return c.y == found[i].y;
                                   });
      if (dup) continue;  // already in the set; the QP handles it
      Constraint c;
      c.y = found[i].y;
      c.loss = task.loss(i, found[i].y);
      // Slack-rescaled constraint: xi >= loss * (1 + w.(phi(y) - phi(gold))),
      // so the dual works with the loss-scaled feature difference.
      c.dphi.assign(task.feature_dim(), 0.0);
      task.add_feature_diff(i, c.y, c.loss, c.dphi);
      cons.push_back(std::move(c));
      ++added;
    }

    if (added > 0) solve_working_set(res.model, res.working_set);

    RoundRecord rec;
    rec.round = round;
    const double mean_xi =
        std::accumulate(res.working_set.xi.begin(), res.working_set.xi.end(),
                        0.0) /
        static_cast<double>(n);
    rec.objective =
        0.5 * res.model.C * squared_norm(res.model.w) + mean_xi;
    rec.added = added;
    rec.success_rate = static_cast<double>(violated) / static_cast<double>(n);
    rec.mean_queries = queries / static_cast<double>(n);
    res.history.push_back(rec);
    if (added == 0) break;
  }
  return res;
}

}  // namespace slackmax
