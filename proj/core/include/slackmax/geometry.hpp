#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

// Geometric primitives for the R^2 embedding of structured labels.
// Every label y is mapped to the point (h(y), g(y)), where h is the
// margin violation 1 + f(y) - f(y_i) and g is the task error L(y, y_i).
// All searches operate on this plane.

namespace slackmax {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LabelPoint {
  double h = 0.0;  // margin-violation value, may be negative
  double g = 0.0;  // task error, always >= 0

  friend bool operator==(const LabelPoint&, const LabelPoint&) = default;
};

// Product objective maximized by all searches.
inline double phi(const LabelPoint& p) { return p.h * p.g; }

// Linear oracle objective h + lambda * g.
inline double lambda_score(const LabelPoint& p, double lambda) {
  return p.h + lambda * p.g;
}

// Slope of a point: g/h, with h <= 0 mapped to +inf (such labels are
// never the product maximizer when a positive-phi label exists).
inline double slope_of(const LabelPoint& p) {
  if (p.h <= 0.0) return kInf;
  return p.g / p.h;
}

// Second intersection of the score line through p with the hyperbola
// of constant phi through p. Shares both the lambda-score and phi of p.
inline LabelPoint mirror_point(const LabelPoint& p, double lambda) {
  return LabelPoint{lambda * p.g, p.h / lambda};
}

struct Segment {
  double lo = 0.0;
  double hi = -1.0;  // default-constructed segment is empty

  static Segment empty_segment() { return Segment{0.0, -1.0}; }
  static Segment all_nonnegative() { return Segment{0.0, kInf}; }

  bool empty() const { return lo > hi; }
  double width() const { return empty() ? 0.0 : hi - lo; }
  bool contains(double x) const { return !empty() && lo <= x && x <= hi; }

  Segment intersect(const Segment& o) const {
    Segment r{std::max(lo, o.lo), std::min(hi, o.hi)};
    return r;
  }
};

// Intervals of h and g values a product maximizer can still occupy after
// observing the oracle answer p at this lambda: the maximizer lies between
// the score line and the phi hyperbola through p, whose intersections are
// p and its mirror.
struct FeasibleSegments {
  Segment h_seg;
  Segment g_seg;
};

inline FeasibleSegments feasible_segments(const LabelPoint& p, double lambda) {
  const LabelPoint z = mirror_point(p, lambda);
  return FeasibleSegments{
      Segment{std::min(p.h, z.h), std::max(p.h, z.h)},
      Segment{std::min(p.g, z.g), std::max(p.g, z.g)},
  };
}

// Upper bound on the optimal phi given the oracle value K = max h + lambda*g.
inline double lambda_value_bound(double K, double lambda) {
  return K * K / (4.0 * lambda);
}

// Capacity of a slope wedge [beta, alpha]. Undefined for the root angle
// (alpha = +inf or beta = 0); callers special-case it.
inline double capacity(double alpha, double beta) {
  if (!(beta > 0.0) || std::isinf(alpha)) {
    throw std::invalid_argument("capacity undefined for the root angle");
  }
  if (alpha < beta) {
    throw std::invalid_argument("capacity requires alpha >= beta");
  }
  return std::sqrt(alpha / beta);
}

// Suboptimality factor of a wedge with capacity a: the true wedge maximum
// exceeds the wedge's oracle answer by at most this ratio.
inline double subopt_bound(double a) { return 0.25 * (a + 1.0 / a) * (a + 1.0 / a); }

// Relative tolerance used for the tangency test z == mirror(z); exact float
// equality on the degenerate h = lambda*g branch is measure-zero.
inline constexpr double kTangencyRelTol = 1e-9;

inline bool tangent(const LabelPoint& p, double lambda) {
  const double a = p.h;
  const double b = lambda * p.g;
  return std::abs(a - b) <= kTangencyRelTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace slackmax
