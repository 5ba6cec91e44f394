#include <algorithm>
#include <random>

#include "doctest.h"
#include "slackmax/dataset.hpp"
#include "slackmax/metrics.hpp"
#include "slackmax/multilabel.hpp"

using namespace slackmax;

TEST_CASE("svmlight-multilabel parsing") {
  const auto ds = parse_multilabel("1,3 5:0.5 9:1.2\n",
                                   DatasetFormat::SvmlightMultilabel);
  REQUIRE(ds.examples.size() == 1);
  CHECK(ds.examples[0].labels == ((1u << 1) | (1u << 3)));
  REQUIRE(ds.examples[0].features.size() == 2);
  CHECK(ds.examples[0].features[0] == std::pair<std::uint32_t, double>{5, 0.5});
  CHECK(ds.d_features == 10);
  CHECK(ds.d_labels == 4);
}

TEST_CASE("empty file is a valid empty dataset") {
  const auto ds = parse_multilabel("", DatasetFormat::SvmlightMultilabel);
  CHECK(ds.examples.empty());
}

TEST_CASE("comments, blank lines and CRLF are tolerated") {
  const auto ds = parse_multilabel("# header\n\n0 1:2.0\r\n",
                                   DatasetFormat::SvmlightMultilabel);
  REQUIRE(ds.examples.size() == 1);
  CHECK(ds.examples[0].labels == 1);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_multilabel("0 1:1\n0 9:1\n",
                                   DatasetFormat::SvmlightMultilabel,
                                   /*d_features=*/5),
                  ParseError);
  try {
    parse_multilabel("0 1:1\n0 9:1\n", DatasetFormat::SvmlightMultilabel, 5);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(
      parse_multilabel("0 nonsense\n", DatasetFormat::SvmlightMultilabel),
      ParseError);
  CHECK_THROWS_AS(
      parse_multilabel("7 1:1\n", DatasetFormat::SvmlightMultilabel, 0, 4),
      ParseError);
  CHECK_THROWS_AS(parse_multilabel("64 1:1\n", DatasetFormat::SvmlightMultilabel),
                  ParseError);
}

TEST_CASE("csv format") {
  const auto ds = parse_multilabel("0|2,1.5,0,2.5\n1,0,1,0\n",
                                   DatasetFormat::Csv);
  REQUIRE(ds.examples.size() == 2);
  CHECK(ds.examples[0].labels == 0b101);
  CHECK(ds.examples[1].labels == 0b010);
  CHECK(ds.d_features == 3);
  // zeros are dropped from the sparse representation
  CHECK(ds.examples[0].features.size() == 2);
  CHECK_THROWS_AS(parse_multilabel("0,abc\n", DatasetFormat::Csv), ParseError);
}

TEST_CASE("serialize/parse round-trip is canonical") {
  const std::string messy = "# c\n3,1 9:1.25 2:0.5\n\n0 1:2\n";
  const auto ds = parse_multilabel(messy, DatasetFormat::SvmlightMultilabel);
  const std::string canon = serialize_multilabel(ds);
  CHECK(canon == "1,3 2:0.5 9:1.25\n0 1:2\n");
  const auto again = parse_multilabel(canon, DatasetFormat::SvmlightMultilabel);
  CHECK(serialize_multilabel(again) == canon);
  REQUIRE(again.examples.size() == ds.examples.size());
  for (std::size_t i = 0; i < again.examples.size(); ++i) {
    CHECK(again.examples[i].labels == ds.examples[i].labels);
    CHECK(again.examples[i].features == ds.examples[i].features);
  }
}

TEST_CASE("adversarial_instance") {
  const auto inst = adversarial_instance(1e-3, 1.0, 1.0);
  CHECK(inst->point_of(0) == LabelPoint{1e-3, 1.0});
  CHECK(inst->point_of(1) == LabelPoint{1.0, 1e-3});
  CHECK(inst->point_of(2) == LabelPoint{0.5, 0.5});
  CHECK(phi(brute_force_max(*inst)) == 0.25);
  CHECK_THROWS_AS(adversarial_instance(0.0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(adversarial_instance(0.6, 1, 1), std::invalid_argument);
}

TEST_CASE("random_instance determinism and ranges") {
  const auto a = random_instance(1, PointDistribution::Uniform, 5);
  CHECK(a->points().size() == 1);
  const auto b = random_instance(500, PointDistribution::Uniform, 99);
  const auto c = random_instance(500, PointDistribution::Uniform, 99);
  REQUIRE(b->points().size() == 500);
  for (std::size_t i = 0; i < 500; ++i) {
    CHECK(b->point_of(i) == c->point_of(i));
    CHECK(b->point_of(i).h > 0.0);
    CHECK(b->point_of(i).h <= 1.0);
    CHECK(b->point_of(i).g >= 0.0);
    CHECK(b->point_of(i).g <= 1.0);
  }
  const auto d = random_instance(500, PointDistribution::Clustered, 99);
  for (std::size_t i = 0; i < 500; ++i) {
    CHECK(d->point_of(i).h > 0.0);
    CHECK(d->point_of(i).g >= 0.0);
  }
}

TEST_CASE("taxonomy loss weights") {
  // 0 is root; 1, 2 children of 0; 3 child of 1
  const std::vector<int> parent{-1, 0, 0, 1};
  const auto w = taxonomy_loss_weights(parent);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == 4.0);  // 3 descendants
  CHECK(w[1] == 2.0);
  CHECK(w[2] == 1.0);
  CHECK(w[3] == 1.0);
}

TEST_CASE("metrics match an independent computation") {
  // 10 examples over 4 labels, fixed fixture
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> pg{
      {0b0011, 0b0011}, {0b0000, 0b0001}, {0b0101, 0b0100}, {0b1111, 0b1111},
      {0b1000, 0b0001}, {0b0110, 0b0110}, {0b0010, 0b0011}, {0b0001, 0b0000},
      {0b1010, 0b1011}, {0b0100, 0b0111}};
  const MetricsReport r = multilabel_metrics(pg, 4);

  // independent, written in the dumbest possible style
  double jac = 0, ham = 0;
  double tp[4] = {0}, fp[4] = {0}, fn[4] = {0};
  for (const auto& [p, g] : pg) {
    int i = 0, u = 0;
    for (int j = 0; j < 4; ++j) {
      const bool pb = p & (1u << j), gb = g & (1u << j);
      if (pb && gb) i++;
      if (pb || gb) u++;
      if (pb != gb) ham += 1;
      if (pb && gb) tp[j]++;
      if (pb && !gb) fp[j]++;
      if (!pb && gb) fn[j]++;
    }
    jac += u == 0 ? 1.0 : double(i) / u;
  }
  CHECK(r.acc == doctest::Approx(jac / 10).epsilon(1e-12));
  CHECK(r.label_loss == doctest::Approx(ham / 40).epsilon(1e-12));
  double TP = tp[0] + tp[1] + tp[2] + tp[3];
  double FP = fp[0] + fp[1] + fp[2] + fp[3];
  double FN = fn[0] + fn[1] + fn[2] + fn[3];
  CHECK(r.micro_f1 == doctest::Approx(2 * TP / (2 * TP + FP + FN)).epsilon(1e-12));
  double mf = 0;
  for (int j = 0; j < 4; ++j) {
    const double den = 2 * tp[j] + fp[j] + fn[j];
    mf += den == 0 ? 1.0 : 2 * tp[j] / den;
  }
  CHECK(r.macro_f1 == doctest::Approx(mf / 4).epsilon(1e-12));

  // permutation invariance
  auto shuffled = pg;
  std::mt19937_64 rng(1);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const MetricsReport r2 = multilabel_metrics(shuffled, 4);
  CHECK(r2.acc == r.acc);
  CHECK(r2.label_loss == r.label_loss);
  CHECK(r2.micro_f1 == r.micro_f1);
  CHECK(r2.macro_f1 == r.macro_f1);
}

TEST_CASE("metric edge cases") {
  const MetricsReport perfect =
      multilabel_metrics({{0b01, 0b01}, {0b10, 0b10}}, 2);
  CHECK(perfect.acc == 1.0);
  CHECK(perfect.label_loss == 0.0);
  CHECK(perfect.micro_f1 == 1.0);
  CHECK(perfect.macro_f1 == 1.0);

  // every prediction wrong with exactly 2 of 4 bits differing
  const MetricsReport half =
      multilabel_metrics({{0b0011, 0b0101}, {0b1100, 0b1010}}, 4);
  CHECK(half.label_loss == 0.5);
}

TEST_CASE("synthetic multi-label data is separable by construction") {
  const auto ds = synthetic_multilabel(50, 6, 4, 123, 0.5);
  CHECK(ds.examples.size() == 50);
  CHECK(ds.d_features == 6);
  CHECK(ds.d_labels == 4);
  const auto again = synthetic_multilabel(50, 6, 4, 123, 0.5);
  CHECK(serialize_multilabel(ds) == serialize_multilabel(again));
}
