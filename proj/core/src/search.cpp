#include "slackmax/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <vector>

namespace slackmax {

namespace {

// Bracket for the scalar lambda searches: a wide fixed log-scale window
// rather than anything problem-derived, so all callers behave the same.
constexpr double kLambdaBracketLo = 1e-6;
constexpr double kLambdaBracketHi = 1e6;
constexpr double kGoldenLogTol = 1e-4;

constexpr double kBisectRelTol = 1e-9;
constexpr double kSlopeFloorRel = 1e-12;

// Largest finite slope bound: used to re-issue a wedge query without the
// slope-infinity (h <= 0) labels.
constexpr double kSlopeCap = 1e300;

struct Incumbent {
  std::optional<LabelId> label;
  LabelPoint point;
  double best_phi = 0.0;

  void offer(const OracleAnswer& ans) {
    if (!ans.label) return;
    const double v = phi(ans.point);
    if (v > best_phi && v > 0.0) {
      best_phi = v;
      label = ans.label;
      point = ans.point;
    }
  }

  SearchOutcome outcome(int queries, Certificate cert) const {
    SearchOutcome out;
    out.best_label = label;
    out.best_point = label ? point : LabelPoint{};
    out.best_phi = best_phi;
    out.queries = queries;
    out.certificate = cert;
    return out;
  }
};

// Golden-section minimization over log-lambda. f is evaluated once per
// probe; evaluation count is bounded by the caller's query budget.
template <class F>
void golden_minimize_log(F&& f, int max_evals) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(kLambdaBracketLo);
  double b = std::log(kLambdaBracketHi);
  int evals = 0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  if (max_evals < 2) {
    if (max_evals == 1) f(std::exp(0.5 * (a + b)));
    return;
  }
  double fc = f(std::exp(c));
  double fd = f(std::exp(d));
  evals = 2;
  while (b - a > kGoldenLogTol && evals < max_evals) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(std::exp(d));
    }
    ++evals;
  }
}

}  // namespace

SearchOutcome sarawagi_search(const ProblemInstance& inst, double xi,
                              const SearchConfig& cfg) {
  Incumbent inc;
  int queries = 0;
  auto F = [&](double lambda) {
    const OracleAnswer ans = inst.lambda_oracle(lambda, false);
    ++queries;
    inc.offer(ans);
    if (cfg.trace) {
      cfg.trace({queries, lambda, kInf, 0.0, 0, ans.label.has_value(),
                 ans.point, inc.best_phi, kInf});
    }
    return lambda_score(ans.point, lambda) - 2.0 * std::sqrt(xi * lambda);
  };
  golden_minimize_log(F, cfg.max_queries);
  return inc.outcome(queries, Certificate::heuristic());
}

SearchOutcome binary_search_upper(const ProblemInstance& inst,
                                  const SearchConfig& cfg) {
  Incumbent inc;
  int queries = 0;
  double min_fbar = kInf;
  auto Fbar = [&](double lambda) {
    // max_y h/lambda + lambda*g equals the lambda-oracle value at lambda^2
    // divided by lambda.
    const OracleAnswer ans = inst.lambda_oracle(lambda * lambda, false);
    ++queries;
    inc.offer(ans);
    const double v = lambda_score(ans.point, lambda * lambda) / lambda;
    const double fbar = 0.25 * v * v;
    min_fbar = std::min(min_fbar, fbar);
    if (cfg.trace) {
      cfg.trace({queries, lambda, kInf, 0.0, 0, ans.label.has_value(),
                 ans.point, inc.best_phi, min_fbar});
    }
    return fbar;
  };
  golden_minimize_log(Fbar, cfg.max_queries);
  const Certificate cert = inc.best_phi > 0.0
                               ? Certificate::bound_gap(min_fbar / inc.best_phi)
                               : Certificate::bound_gap(kInf);
  return inc.outcome(queries, cert);
}

bool early_stop_check(double lambda_lo, double lambda_hi, LabelId y_lo,
                      LabelId y_hi) {
  (void)lambda_lo;
  (void)lambda_hi;
  return y_lo == y_hi;
}

SearchOutcome bisecting_search(const ProblemInstance& inst,
                               const SearchConfig& cfg) {
  Incumbent inc;
  int queries = 0;
  double lambda = cfg.lambda0 > 0.0 ? cfg.lambda0 : 1.0;

  Segment H = Segment::all_nonnegative();
  Segment G = Segment::all_nonnegative();
  double L_lo = 0.0;
  double L_hi = kInf;
  std::optional<LabelId> lo_label, hi_label;
  double bound_min = kInf;

  while (queries < cfg.max_queries) {
    const OracleAnswer ans = inst.lambda_oracle(lambda, false);
    ++queries;
    inc.offer(ans);
    const LabelPoint& p = ans.point;
    bound_min = std::min(bound_min,
                         lambda_value_bound(lambda_score(p, lambda), lambda));
    if (cfg.trace) {
      cfg.trace({queries, lambda, kInf, 0.0, 0, ans.label.has_value(), p,
                 inc.best_phi, bound_min});
    }

    const FeasibleSegments fs = feasible_segments(p, lambda);
    H = H.intersect(fs.h_seg);
    G = G.intersect(fs.g_seg);
    if (H.empty() || G.empty()) break;
    const bool h_pinned = H.width() <= kBisectRelTol * std::max(std::abs(H.hi), 1e-300);
    const bool g_pinned = G.width() <= kBisectRelTol * std::max(std::abs(G.hi), 1e-300);
    if (h_pinned && g_pinned) break;

    if (p.h >= lambda * p.g) {
      // h(y_lambda) is non-increasing in lambda, so the optimum needs
      // lambda' >= lambda.
      L_lo = lambda;
      lo_label = ans.label;
    } else {
      L_hi = lambda;
      hi_label = ans.label;
    }
    if (lo_label && hi_label &&
        early_stop_check(L_lo, L_hi, *lo_label, *hi_label)) {
      break;
    }

    if (std::isinf(L_hi)) {
      lambda = std::max(L_lo, 1e-12) * 2.0;
      if (lambda > 1e12) break;
    } else if (L_lo == 0.0) {
      lambda = L_hi / 2.0;
      if (lambda < 1e-12) break;
    } else {
      if (L_hi - L_lo <= kBisectRelTol * L_hi) break;
      lambda = 0.5 * (L_lo + L_hi);
    }
  }

  const Certificate cert = inc.best_phi > 0.0
                               ? Certificate::bound_gap(bound_min / inc.best_phi)
                               : Certificate::bound_gap(kInf);
  return inc.outcome(queries, cert);
}

double angle_upper_bound(const Angle& a) { return a.upper_bound; }

std::pair<Angle, Angle> split_angle(const Angle& a, const LabelPoint& z,
                                    double lambda) {
  const LabelPoint zm = mirror_point(z, lambda);
  const double product = phi(z);
  const LabelPoint r{std::sqrt(lambda * product), std::sqrt(product / lambda)};

  const double sz = slope_of(z);
  const double szm = slope_of(zm);
  double hi_slope, lo_slope;
  StrictSide strict;
  if (sz >= szm) {
    // Answer on the upper boundary: keep alpha open in both children so z
    // is never returned again; the shared boundary slope(r) then lands in
    // the upper child only.
    hi_slope = sz;
    lo_slope = szm;
    strict = StrictSide::AlphaStrict;
  } else {
    hi_slope = szm;
    lo_slope = sz;
    strict = StrictSide::BetaStrict;
  }
  // Guard against numeric drift outside the parent wedge.
  hi_slope = std::min(hi_slope, a.alpha);
  lo_slope = std::max(lo_slope, a.beta);
  double mid = slope_of(r);
  mid = std::clamp(mid, lo_slope, hi_slope);

  auto make_child = [&](double alpha, double beta) {
    Angle c;
    c.alpha = alpha;
    c.beta = beta;
    c.strict_side = strict;
    c.depth = a.depth + 1;
    double cap = kInf;
    if (beta > 0.0 && !std::isinf(alpha) && alpha >= beta) {
      cap = capacity(alpha, beta);
    }
    c.upper_bound = std::isinf(cap) ? kInf : product * subopt_bound(cap);
    return c;
  };
  return {make_child(hi_slope, mid), make_child(mid, lo_slope)};
}

SearchOutcome angular_search(const ProblemInstance& inst,
                             const SearchConfig& cfg) {
  if (!inst.supports_constraints()) {
    throw UnsupportedConstraint("angular search needs a constrained oracle");
  }

  Incumbent inc;
  int total_queries = 0;
  int constrained_queries = 0;

  double H_hat = cfg.H_hat;
  double G_hat = cfg.G_hat;
  double lambda0 = cfg.lambda0;
  if (lambda0 <= 0.0) {
    if (H_hat <= 0.0) {
      const OracleAnswer a = inst.lambda_oracle(1e-9, false);
      ++total_queries;
      inc.offer(a);
      H_hat = a.point.h;
    }
    if (G_hat <= 0.0) {
      const OracleAnswer a = inst.lambda_oracle(1e9, false);
      ++total_queries;
      inc.offer(a);
      G_hat = a.point.g;
    }
    lambda0 = (H_hat > 0.0 && G_hat > 0.0) ? G_hat / H_hat : 1.0;
  }

  Angle root;
  if (cfg.phi_floor > 0.0 && H_hat > 0.0 && G_hat > 0.0) {
    root.alpha = G_hat * G_hat / cfg.phi_floor;
    root.beta = cfg.phi_floor / (H_hat * H_hat);
  }
  root.strict_side = StrictSide::BetaStrict;
  root.upper_bound = kInf;
  root.depth = 0;

  auto cmp = [](const Angle& x, const Angle& y) {
    return x.upper_bound < y.upper_bound;
  };
  std::priority_queue<Angle, std::vector<Angle>, decltype(cmp)> heap(cmp);
  std::deque<Angle> fifo;
  auto push = [&](const Angle& a) {
    if (cfg.fifo_queue) {
      fifo.push_back(a);
    } else {
      heap.push(a);
    }
  };
  auto queue_empty = [&] { return cfg.fifo_queue ? fifo.empty() : heap.empty(); };
  auto best_remaining = [&]() -> double {
    if (cfg.fifo_queue) {
      double b = 0.0;
      for (const Angle& a : fifo) b = std::max(b, a.upper_bound);
      return b;
    }
    return heap.top().upper_bound;
  };
  auto pop = [&] {
    Angle a;
    if (cfg.fifo_queue) {
      a = fifo.front();
      fifo.pop_front();
    } else {
      a = heap.top();
      heap.pop();
    }
    return a;
  };

  push(root);
  Certificate cert = Certificate::exact();
  while (!queue_empty()) {
    const double bub = best_remaining();
    if (inc.best_phi > 0.0 && bub <= inc.best_phi) {
      cert = Certificate::exact();
      break;
    }
    if (inc.best_phi > 0.0 && !std::isinf(bub) &&
        inc.best_phi > cfg.stop_ratio * bub) {
      cert = Certificate::bound_gap(bub / inc.best_phi);
      break;
    }
    if (constrained_queries >= cfg.max_queries) {
      cert = Certificate::bound_gap(inc.best_phi > 0.0 ? bub / inc.best_phi
                                                       : kInf);
      break;
    }

    const Angle a = pop();
    if (inc.best_phi > 0.0 && a.upper_bound <= inc.best_phi) continue;

    const bool finite_wedge = a.beta > 0.0 && !std::isinf(a.alpha);
    const double lambda =
        finite_wedge ? 1.0 / std::sqrt(a.alpha * a.beta) : lambda0;

    OracleQuery q;
    q.lambda = lambda;
    q.alpha = a.alpha;
    q.beta = a.beta;
    q.strict_side = a.strict_side;
    const OracleAnswer ans = inst.constrained_lambda_oracle(q);
    ++total_queries;
    ++constrained_queries;
    inc.offer(ans);
    if (cfg.trace) {
      cfg.trace({constrained_queries, lambda, a.alpha, a.beta, a.depth,
                 ans.label.has_value(), ans.point, inc.best_phi, a.upper_bound});
    }
    if (!ans.label) continue;  // wedge empty, discard

    const LabelPoint& p = ans.point;
    if (p.h <= 0.0) {
      // Slope-infinity answer masked the wedge: requery without the
      // h <= 0 labels (only possible when alpha is infinite).
      if (std::isinf(a.alpha)) {
        Angle retry = a;
        retry.alpha = kSlopeCap;
        push(retry);
      }
      continue;
    }
    if (p.g <= 0.0) continue;  // unreachable with beta >= 0 strict wedges
    if (tangent(p, lambda)) continue;  // score line touches the hyperbola:
                                       // nothing in this wedge beats p
    if (finite_wedge && a.alpha - a.beta <= kSlopeFloorRel * a.alpha) continue;

    const auto [hi, lo] = split_angle(a, p, lambda);
    push(hi);
    push(lo);
  }

  if (queue_empty()) cert = Certificate::exact();
  return inc.outcome(total_queries, cert);
}

std::optional<SearchKind> parse_search_kind(const std::string& name) {
  if (name == "sarawagi") return SearchKind::Sarawagi;
  if (name == "binary") return SearchKind::BinaryUpper;
  if (name == "bisecting") return SearchKind::Bisecting;
  if (name == "angular") return SearchKind::Angular;
  return std::nullopt;
}

std::string search_kind_name(SearchKind kind) {
  switch (kind) {
    case SearchKind::Sarawagi:
      return "sarawagi";
    case SearchKind::BinaryUpper:
      return "binary";
    case SearchKind::Bisecting:
      return "bisecting";
    case SearchKind::Angular:
      return "angular";
  }
  return "?";
}

SearchOutcome run_search(SearchKind kind, const ProblemInstance& inst,
                         double xi, const SearchConfig& cfg) {
  switch (kind) {
    case SearchKind::Sarawagi:
      return sarawagi_search(inst, xi, cfg);
    case SearchKind::BinaryUpper:
      return binary_search_upper(inst, cfg);
    case SearchKind::Bisecting:
      return bisecting_search(inst, cfg);
    case SearchKind::Angular:
      return angular_search(inst, cfg);
  }
  throw std::logic_error("unknown search kind");
}

}  // namespace slackmax
