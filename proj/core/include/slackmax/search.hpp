#pragma once

#include <functional>
#include <optional>
#include <string>

#include "slackmax/oracle.hpp"

namespace slackmax {

// Quality of a SearchOutcome: Exact certifies best_phi is the global
// maximum, BoundGap carries an upper-bound / incumbent ratio >= 1,
// HeuristicOnly promises nothing beyond soundness.
enum class CertificateKind { Exact, BoundGap, HeuristicOnly };

struct Certificate {
  CertificateKind kind = CertificateKind::HeuristicOnly;
  double ratio = kInf;  // meaningful for BoundGap only

  static Certificate exact() { return {CertificateKind::Exact, 1.0}; }
  static Certificate bound_gap(double r) {
    return {CertificateKind::BoundGap, std::max(r, 1.0)};
  }
  static Certificate heuristic() { return {CertificateKind::HeuristicOnly, kInf}; }
};

struct SearchOutcome {
  std::optional<LabelId> best_label;
  LabelPoint best_point;
  double best_phi = 0.0;  // max(0, phi of best label); 0 = no violation found
  int queries = 0;
  Certificate certificate;
};

// A slope wedge queued by angular search, together with the optimistic
// phi bound inherited from the oracle answer that produced it.
struct Angle {
  double alpha = kInf;
  double beta = 0.0;
  StrictSide strict_side = StrictSide::BetaStrict;
  double upper_bound = kInf;  // optimistic phi inside the wedge
  int depth = 0;
};

// phi(answer) * B(v(angle)) when the angle records the answer that spawned
// it (through upper_bound); +inf for the unvisited root.
double angle_upper_bound(const Angle& a);

// Algorithm step record, one per oracle query.
struct TraceRecord {
  int t = 0;
  double lambda = 0.0;
  double alpha = kInf;
  double beta = 0.0;
  int depth = 0;
  bool has_answer = false;
  LabelPoint answer;
  double phi_hat = 0.0;
  double upper_bound = kInf;
};

using TraceSink = std::function<void(const TraceRecord&)>;

struct SearchConfig {
  double lambda0 = 0.0;    // initial lambda; <= 0 means probe H_hat/G_hat
  double phi_floor = 0.0;  // assumed lower bound on phi*, tightens root wedge
  double H_hat = 0.0;      // max_y h estimate; 0 = probe
  double G_hat = 0.0;      // max_y g estimate; 0 = probe
  int max_queries = 100000;
  double stop_ratio = 0.999;  // stop when phi_hat / best bound exceeds this
  double epsilon_viol = 1e-12;
  bool fifo_queue = false;  // breadth-first instead of best-bound-first
  TraceSink trace;
};

// Golden-section minimization of Sarawagi & Gupta's F(lambda) =
// K(lambda) - 2 sqrt(xi lambda); returns the best phi among labels seen.
SearchOutcome sarawagi_search(const ProblemInstance& inst, double xi,
                              const SearchConfig& cfg);

// Golden-section minimization of the convex upper bound
// Fbar(lambda) = 1/4 (max_y h/lambda + lambda g)^2; slack-free, so usable
// inside unconstrained trainers.
SearchOutcome binary_search_upper(const ProblemInstance& inst,
                                  const SearchConfig& cfg);

// Interval-halving search in the (h, g) plane (lambda-oracle only).
SearchOutcome bisecting_search(const ProblemInstance& inst,
                               const SearchConfig& cfg);

// Safe interval termination: the oracle answer is constant on
// [lambda_lo, lambda_hi] when both endpoints return the same label.
bool early_stop_check(double lambda_lo, double lambda_hi, LabelId y_lo,
                      LabelId y_hi);

// Wedge split through the geometric-mean ray: children
// (slope(P), slope(R)) and (slope(R), slope(Q)) where P/Q are the answer
// and its mirror ordered by slope. Strictness is assigned so the answer's
// boundary stays open in both children and the shared boundary lands in
// exactly one.
std::pair<Angle, Angle> split_angle(const Angle& a, const LabelPoint& z,
                                    double lambda);

// Exact maximizer of phi via the constrained lambda-oracle (angular
// search). Requires constraint support from the backend.
SearchOutcome angular_search(const ProblemInstance& inst,
                             const SearchConfig& cfg);

enum class SearchKind { Sarawagi, BinaryUpper, Bisecting, Angular };

std::optional<SearchKind> parse_search_kind(const std::string& name);
std::string search_kind_name(SearchKind kind);

// Uniform entry point; xi is only used by the Sarawagi baseline.
SearchOutcome run_search(SearchKind kind, const ProblemInstance& inst,
                         double xi, const SearchConfig& cfg);

}  // namespace slackmax
