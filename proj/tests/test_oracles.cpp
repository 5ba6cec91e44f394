#include <cmath>
#include <random>

#include "doctest.h"
#include "slackmax/chain.hpp"
#include "slackmax/dataset.hpp"
#include "slackmax/multilabel.hpp"
#include "slackmax/oracle.hpp"

using namespace slackmax;

namespace {

// Independent reference scan (deliberately not reusing the library's loop).
OracleAnswer scan_best(const std::vector<LabelPoint>& pts, double lambda) {
  OracleAnswer best;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double s = pts[i].h + lambda * pts[i].g;
    if (!best.label || s > lambda_score(best.point, lambda)) {
      best.label = i;
      best.point = pts[i];
    }
  }
  return best;
}

std::vector<LabelPoint> random_points(std::mt19937_64& rng, int n,
                                      bool allow_negative_h = false) {
  std::uniform_real_distribution<double> U(0.0, 4.0);
  std::vector<LabelPoint> pts;
  for (int i = 0; i < n; ++i) {
    double h = U(rng) + 1e-3;
    if (allow_negative_h && (rng() & 3) == 0) h = -h;
    pts.push_back({h, U(rng)});
  }
  return pts;
}

}  // namespace

TEST_CASE("enumeration lambda-oracle matches a brute-force scan") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> L(0.01, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = random_points(rng, 50, true);
    const auto inst = enumeration_backend(pts);
    const double lam = L(rng);
    const auto got = inst->lambda_oracle(lam, false);
    const auto want = scan_best(pts, lam);
    REQUIRE(got.label.has_value());
    CHECK(lambda_score(got.point, lam) ==
          doctest::Approx(lambda_score(want.point, lam)).epsilon(1e-12));
  }
}

TEST_CASE("ties break toward the smallest label id") {
  const auto inst = enumeration_backend({{1, 1}, {1, 1}, {2, 0}});
  // (1,1) and (2,0) tie at lambda=1; ids 0 and 1 tie with each other too
  const auto ans = inst->lambda_oracle(1.0, false);
  REQUIRE(ans.label.has_value());
  CHECK(*ans.label == 0);
}

TEST_CASE("exclude_zero_loss drops the gold label") {
  const auto inst = enumeration_backend({{5, 0}, {1, 1}}, LabelId{0});
  const auto with = inst->lambda_oracle(0.1, false);
  const auto without = inst->lambda_oracle(0.1, true);
  CHECK(*with.label == 0);
  CHECK(*without.label == 1);
}

TEST_CASE("single-label instance returns that label for any lambda") {
  const auto inst = enumeration_backend({{1, 1}});
  for (const double lam : {1e-6, 0.3, 1.0, 7.0, 1e6}) {
    CHECK(*inst->lambda_oracle(lam, false).label == 0);
  }
}

TEST_CASE("constrained oracle feasibility and empty answers") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> U(0.01, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = random_points(rng, 40, true);
    const auto inst = enumeration_backend(pts);
    OracleQuery q;
    q.lambda = U(rng);
    q.beta = U(rng) * 0.3;
    q.alpha = q.beta + U(rng);
    q.strict_side = (trial & 1) ? StrictSide::AlphaStrict : StrictSide::BetaStrict;
    const auto ans = inst->constrained_lambda_oracle(q);
    bool any_feasible = false;
    double best = -kInf;
    for (const auto& p : pts) {
      if (!wedge_admits(slope_of(p), q.alpha, q.beta, q.strict_side)) continue;
      any_feasible = true;
      best = std::max(best, lambda_score(p, q.lambda));
    }
    if (ans.label) {
      CHECK(wedge_admits(slope_of(ans.point), q.alpha, q.beta, q.strict_side));
      CHECK(lambda_score(ans.point, q.lambda) ==
            doctest::Approx(best).epsilon(1e-12));
    } else {
      CHECK(!any_feasible);
    }
  }
}

TEST_CASE("unbounded wedge with AlphaStrict equals the plain oracle") {
  std::mt19937_64 rng(303);
  const auto pts = random_points(rng, 60);
  const auto inst = enumeration_backend(pts);
  OracleQuery q;
  q.lambda = 0.8;
  q.alpha = kInf;
  q.beta = 0.0;
  q.strict_side = StrictSide::AlphaStrict;
  const auto a = inst->constrained_lambda_oracle(q);
  const auto b = inst->lambda_oracle(0.8, false);
  CHECK(*a.label == *b.label);
}

TEST_CASE("wedge partition: each parent-feasible label lands in one child") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> U(0.01, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double beta = U(rng) * 0.2;
    const double alpha = beta + U(rng);
    const double mid = std::sqrt(alpha * beta);
    const StrictSide s =
        (trial & 1) ? StrictSide::AlphaStrict : StrictSide::BetaStrict;
    for (int k = 0; k < 20; ++k) {
      const double slope = U(rng);
      const bool parent = wedge_admits(slope, alpha, beta, s);
      const int in_children = wedge_admits(slope, alpha, mid, s) +
                              wedge_admits(slope, mid, beta, s);
      CHECK(in_children == (parent ? 1 : 0));
    }
    // the shared boundary itself
    const bool parent = wedge_admits(mid, alpha, beta, s);
    CHECK(wedge_admits(mid, alpha, mid, s) + wedge_admits(mid, mid, beta, s) ==
          (parent ? 1 : 0));
  }
}

TEST_CASE("lambda-oracle monotonicity along increasing lambda") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = random_points(rng, 80);
    const auto inst = enumeration_backend(pts);
    LabelPoint prev = inst->lambda_oracle(1e-4, false).point;
    for (int i = 1; i <= 50; ++i) {
      const double lam = 1e-4 * std::pow(10.0, i * 0.16);  // up to ~1e4
      const LabelPoint cur = inst->lambda_oracle(lam, false).point;
      CHECK(cur.h <= prev.h + 1e-12);
      CHECK(cur.g >= prev.g - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("3-point hard family: plain oracle never finds the middle label") {
  const auto inst = adversarial_instance(1e-3, 1.0, 1.0);
  REQUIRE(inst->points().size() == 3);
  CHECK(inst->point_of(2) == LabelPoint{0.5, 0.5});
  for (int i = 0; i < 10000; ++i) {
    const double lam = std::pow(10.0, -6.0 + 12.0 * i / 9999.0);
    const auto ans = inst->lambda_oracle(lam, false);
    CHECK(*ans.label != 2);
  }
  // but a wedge around slope 1 does find it
  OracleQuery q;
  q.lambda = 1.0;
  q.alpha = 1.1;
  q.beta = 0.9;
  const auto c = inst->constrained_lambda_oracle(q);
  REQUIRE(c.label.has_value());
  CHECK(*c.label == 2);
}

TEST_CASE("factorized multi-label oracle equals enumeration") {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> S(-2.0, 2.0);
  std::uniform_real_distribution<double> L(0.01, 30.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 7);  // up to 8 bits
    std::vector<double> scores(d);
    for (auto& s : scores) s = S(rng);
    const std::uint64_t gold = rng() & ((1u << d) - 1);
    const MultilabelInstance ml(scores, gold);
    const auto full = ml.materialize();
    const double lam = L(rng);
    const bool excl = (trial % 3) == 0;
    const auto fast = ml.lambda_oracle(lam, excl);
    const auto slow = full->lambda_oracle(lam, excl);
    REQUIRE(fast.label.has_value());
    CHECK(lambda_score(fast.point, lam) ==
          doctest::Approx(lambda_score(slow.point, lam)).epsilon(1e-9));
    // the reported point is consistent with the reported mask
    const LabelPoint direct = ml.point_of(*fast.label);
    CHECK(direct.h == doctest::Approx(fast.point.h).epsilon(1e-12));
    CHECK(direct.g == doctest::Approx(fast.point.g).epsilon(1e-12));
  }
}

TEST_CASE("factorized oracle limits") {
  std::vector<double> scores{1.0, 2.0, -0.5};
  const MultilabelInstance ml(scores, 0b000);
  // lambda ~ 0: score argmax -> positive bits on
  const auto low = ml.lambda_oracle(1e-12, false);
  CHECK(*low.label == 0b011);
  // large lambda: flip everything, g -> d
  const auto high = ml.lambda_oracle(1e9, false);
  CHECK(high.point.g == 3.0);
  // constrained queries are not supported
  CHECK(!ml.supports_constraints());
  CHECK_THROWS_AS(ml.constrained_lambda_oracle(OracleQuery{}),
                  UnsupportedConstraint);
}

TEST_CASE("chain Viterbi oracle equals enumeration") {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> S(-1.5, 1.5);
  std::uniform_real_distribution<double> L(0.01, 30.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int T = 2 + static_cast<int>(rng() % 4);  // up to 5
    const int k = 2 + static_cast<int>(rng() % 2);  // 2..3 states
    std::vector<std::vector<double>> unary(T, std::vector<double>(k));
    std::vector<std::vector<double>> trans(k, std::vector<double>(k));
    for (auto& row : unary)
      for (auto& v : row) v = S(rng);
    for (auto& row : trans)
      for (auto& v : row) v = S(rng);
    std::vector<int> gold(T);
    for (auto& t : gold) t = static_cast<int>(rng() % k);
    const ChainInstance ch(unary, trans, gold);
    const auto full = ch.materialize();
    const double lam = L(rng);
    const bool excl = (trial % 3) == 0;
    const auto fast = ch.lambda_oracle(lam, excl);
    const auto slow = full->lambda_oracle(lam, excl);
    REQUIRE(fast.label.has_value());
    CHECK(lambda_score(fast.point, lam) ==
          doctest::Approx(lambda_score(slow.point, lam)).epsilon(1e-9));
    if (excl) CHECK(*fast.label != ch.gold());
  }
}

TEST_CASE("chain basics") {
  // T=1: plain per-position argmax (+lambda on non-gold tags)
  const ChainInstance ch({{0.5, 2.0, -1.0}}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}},
                         {0});
  const auto ans = ch.lambda_oracle(1e-9, false);
  CHECK(ch.decode(*ans.label) == std::vector<int>{1});
  CHECK(!ch.supports_constraints());
  CHECK_THROWS_AS(ch.constrained_lambda_oracle(OracleQuery{}),
                  UnsupportedConstraint);
  // encode/decode round-trip
  const ChainInstance c2({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}},
                         {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, {0, 1, 2, 1});
  const std::vector<int> tags{2, 0, 1, 2};
  CHECK(c2.decode(c2.encode(tags)) == tags);
  CHECK(c2.point_of(c2.gold()).g == 0.0);
}

TEST_CASE("gold label has zero loss and h = 1 at w-independent identity") {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> S(-2.0, 2.0);
  std::vector<double> scores(6);
  for (auto& s : scores) s = S(rng);
  const MultilabelInstance ml(scores, 0b101010);
  const LabelPoint gold = ml.point_of(0b101010);
  CHECK(gold.g == 0.0);
  CHECK(gold.h == 1.0);
}
