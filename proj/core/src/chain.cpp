#include "slackmax/chain.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace slackmax {

namespace {

// Tags with lambda added on non-gold states; shared by both passes.
inline double augment(double unary, bool is_gold, double lambda) {
  return unary + (is_gold ? 0.0 : lambda);
}

}  // namespace

ChainInstance::ChainInstance(std::vector<std::vector<double>> unary,
                             std::vector<std::vector<double>> transition,
                             std::vector<int> gold_tags)
    : unary_(std::move(unary)),
      transition_(std::move(transition)),
      gold_(std::move(gold_tags)) {
  if (unary_.empty() || gold_.size() != unary_.size()) {
    throw std::invalid_argument("need one gold tag per position");
  }
  const std::size_t k = unary_.front().size();
  if (transition_.size() != k) {
    throw std::invalid_argument("transition matrix must be k x k");
  }
  gold_score_ = sequence_score(gold_);
}

double ChainInstance::sequence_score(const std::vector<int>& tags) const {
  double s = 0.0;
  for (std::size_t t = 0; t < tags.size(); ++t) {
    s += unary_[t][static_cast<std::size_t>(tags[t])];
    if (t > 0) {
      s += transition_[static_cast<std::size_t>(tags[t - 1])]
                      [static_cast<std::size_t>(tags[t])];
    }
  }
  return s;
}

LabelId ChainInstance::encode(const std::vector<int>& tags) const {
  const auto k = static_cast<std::uint64_t>(num_states());
  LabelId id = 0;
  std::uint64_t mult = 1;
  for (int tag : tags) {
    id += static_cast<std::uint64_t>(tag) * mult;
    mult *= k;
  }
  return id;
}

std::vector<int> ChainInstance::decode(LabelId id) const {
  const auto k = static_cast<std::uint64_t>(num_states());
  std::vector<int> tags(static_cast<std::size_t>(length()));
  for (auto& tag : tags) {
    tag = static_cast<int>(id % k);
    id /= k;
  }
  return tags;
}

LabelPoint ChainInstance::point_of(LabelId id) const {
  const auto tags = decode(id);
  double g = 0.0;
  for (std::size_t t = 0; t < tags.size(); ++t) {
    if (tags[t] != gold_[t]) g += 1.0;
  }
  return LabelPoint{1.0 + sequence_score(tags) - gold_score_, g};
}

std::optional<std::uint64_t> ChainInstance::label_count() const {
  const int T = length();
  const int k = num_states();
  if (T * std::log2(double(k)) > 62.0) return std::nullopt;
  std::uint64_t M = 1;
  for (int t = 0; t < T; ++t) M *= static_cast<std::uint64_t>(k);
  return M;
}

OracleAnswer ChainInstance::lambda_oracle(double lambda,
                                          bool exclude_zero_loss) const {
  const int T = length();
  const int k = num_states();

  // Forward max-scores and backpointers over the loss-augmented chain.
  std::vector<std::vector<double>> fwd(T, std::vector<double>(k));
  std::vector<std::vector<int>> bp(T, std::vector<int>(k, -1));
  for (int s = 0; s < k; ++s) fwd[0][s] = augment(unary_[0][s], s == gold_[0], lambda);
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < k; ++s) {
      double best = -kInf;
      int arg = 0;
      for (int p = 0; p < k; ++p) {
        const double v = fwd[t - 1][p] + transition_[p][s];
        if (v > best) {
          best = v;
          arg = p;
        }
      }
      fwd[t][s] = best + augment(unary_[t][s], s == gold_[t], lambda);
      bp[t][s] = arg;
    }
  }

  std::vector<int> tags(static_cast<std::size_t>(T));
  {
    int arg = 0;
    for (int s = 1; s < k; ++s) {
      if (fwd[T - 1][s] > fwd[T - 1][arg]) arg = s;
    }
    tags[static_cast<std::size_t>(T - 1)] = arg;
    for (int t = T - 1; t > 0; --t) {
      tags[static_cast<std::size_t>(t - 1)] = bp[t][tags[static_cast<std::size_t>(t)]];
    }
  }

  if (exclude_zero_loss && tags == gold_) {
    // Best sequence differing from gold somewhere: backward pass, then the
    // best "forced mismatch at position t" stitch.
    std::vector<std::vector<double>> bwd(T, std::vector<double>(k));
    std::vector<std::vector<int>> fp(T, std::vector<int>(k, -1));
    for (int s = 0; s < k; ++s) {
      bwd[T - 1][s] = augment(unary_[T - 1][s], s == gold_[T - 1], lambda);
    }
    for (int t = T - 2; t >= 0; --t) {
      for (int s = 0; s < k; ++s) {
        double best = -kInf;
        int arg = 0;
        for (int nx = 0; nx < k; ++nx) {
          const double v = bwd[t + 1][nx] + transition_[s][nx];
          if (v > best) {
            best = v;
            arg = nx;
          }
        }
        bwd[t][s] = best + augment(unary_[t][s], s == gold_[t], lambda);
        fp[t][s] = arg;
      }
    }
    double best = -kInf;
    int bt = 0, bs = 0;
    for (int t = 0; t < T; ++t) {
      for (int s = 0; s < k; ++s) {
        if (s == gold_[t]) continue;
        const double v =
            fwd[t][s] + bwd[t][s] - augment(unary_[t][s], false, lambda);
        if (v > best) {
          best = v;
          bt = t;
          bs = s;
        }
      }
    }
    tags[static_cast<std::size_t>(bt)] = bs;
    for (int t = bt; t > 0; --t) {
      tags[static_cast<std::size_t>(t - 1)] = bp[t][tags[static_cast<std::size_t>(t)]];
    }
    for (int t = bt; t + 1 < T; ++t) {
      tags[static_cast<std::size_t>(t + 1)] = fp[t][tags[static_cast<std::size_t>(t)]];
    }
  }

  const LabelId id = encode(tags);
  return OracleAnswer{id, point_of(id)};
}

std::unique_ptr<EnumerationInstance> ChainInstance::materialize() const {
  const auto M = label_count();
  if (!M || *M > (std::uint64_t{1} << 20)) {
    throw std::invalid_argument("label space too large to materialize");
  }
  std::vector<LabelPoint> pts;
  pts.reserve(static_cast<std::size_t>(*M));
  for (std::uint64_t id = 0; id < *M; ++id) pts.push_back(point_of(id));
  return enumeration_backend(std::move(pts), gold());
}

ChainAdapter::ChainAdapter(ChainDataset dataset) : dataset_(std::move(dataset)) {
  if (dataset_.num_states < 1 || dataset_.d_obs < 1) {
    throw std::invalid_argument("chain dataset needs num_states and d_obs");
  }
}

std::size_t ChainAdapter::feature_dim() const {
  const auto k = static_cast<std::size_t>(dataset_.num_states);
  return k * static_cast<std::size_t>(dataset_.d_obs) + k * k;
}

ChainInstance ChainAdapter::build_chain(const ModelState& model,
                                        std::size_t example) const {
  const auto& ex = dataset_.examples.at(example);
  const int k = dataset_.num_states;
  const int d = dataset_.d_obs;
  const std::size_t T = ex.obs.size();

  std::vector<std::vector<double>> unary(T, std::vector<double>(k, 0.0));
  for (std::size_t t = 0; t < T; ++t) {
    for (int s = 0; s < k; ++s) {
      const std::size_t base = static_cast<std::size_t>(s) * d;
      for (int f = 0; f < d; ++f) {
        unary[t][static_cast<std::size_t>(s)] +=
            model.w[base + static_cast<std::size_t>(f)] * ex.obs[t][static_cast<std::size_t>(f)];
      }
    }
  }
  std::vector<std::vector<double>> trans(k, std::vector<double>(k));
  const std::size_t off = static_cast<std::size_t>(k) * d;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      trans[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          model.w[off + static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)];
    }
  }
  return ChainInstance(std::move(unary), std::move(trans), ex.tags);
}

std::unique_ptr<ProblemInstance> ChainAdapter::make_instance(
    const ModelState& model, std::size_t example, BackendKind kind) const {
  ChainInstance inst = build_chain(model, example);
  if (kind == BackendKind::Enumerate) return inst.materialize();
  return std::make_unique<ChainInstance>(std::move(inst));
}

void ChainAdapter::add_feature_diff(std::size_t example, LabelId y, double scale,
                                    std::vector<double>& out) const {
  const auto& ex = dataset_.examples.at(example);
  const int k = dataset_.num_states;
  const int d = dataset_.d_obs;
  const std::size_t off = static_cast<std::size_t>(k) * d;

  // Decode without building a full instance.
  std::vector<int> tags(ex.tags.size());
  {
    LabelId id = y;
    for (auto& tag : tags) {
      tag = static_cast<int>(id % static_cast<std::uint64_t>(k));
      id /= static_cast<std::uint64_t>(k);
    }
  }
  for (std::size_t t = 0; t < tags.size(); ++t) {
    if (tags[t] != ex.tags[t]) {
      for (int f = 0; f < d; ++f) {
        const double v = ex.obs[t][static_cast<std::size_t>(f)];
        out[static_cast<std::size_t>(tags[t]) * d + static_cast<std::size_t>(f)] += scale * v;
        out[static_cast<std::size_t>(ex.tags[t]) * d + static_cast<std::size_t>(f)] -= scale * v;
      }
    }
    if (t > 0) {
      const auto yi = off + static_cast<std::size_t>(tags[t - 1]) * k +
                      static_cast<std::size_t>(tags[t]);
      const auto gi = off + static_cast<std::size_t>(ex.tags[t - 1]) * k +
                      static_cast<std::size_t>(ex.tags[t]);
      if (yi != gi) {
        out[yi] += scale;
        out[gi] -= scale;
      }
    }
  }
}

double ChainAdapter::loss(std::size_t example, LabelId y) const {
  const auto& ex = dataset_.examples.at(example);
  const auto k = static_cast<std::uint64_t>(dataset_.num_states);
  double g = 0.0;
  for (int tag : ex.tags) {
    if (static_cast<int>(y % k) != tag) g += 1.0;
    y /= k;
  }
  return g;
}

LabelId ChainAdapter::gold_label(std::size_t example) const {
  const auto& ex = dataset_.examples.at(example);
  const auto k = static_cast<std::uint64_t>(dataset_.num_states);
  LabelId id = 0;
  std::uint64_t mult = 1;
  for (int tag : ex.tags) {
    id += static_cast<std::uint64_t>(tag) * mult;
    mult *= k;
  }
  return id;
}

LabelId ChainAdapter::predict(const ModelState& model, std::size_t example) const {
  // MAP decoding = lambda-oracle at lambda -> 0 with no loss term; reuse the
  // instance with lambda = 0.
  return *build_chain(model, example).lambda_oracle(0.0, false).label;
}

ChainDataset synthetic_chain(std::size_t n, int length, int num_states,
                             int d_obs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> tag_dist(0, num_states - 1);

  // State-conditional observation means.
  std::vector<std::vector<double>> means(num_states, std::vector<double>(d_obs));
  for (auto& m : means) {
    for (auto& v : m) v = 2.0 * gauss(rng);
  }

  ChainDataset ds;
  ds.num_states = num_states;
  ds.d_obs = d_obs;
  for (std::size_t i = 0; i < n; ++i) {
    ChainExample ex;
    int tag = tag_dist(rng);
    for (int t = 0; t < length; ++t) {
      // Sticky transitions.
      if (t > 0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5) {
        tag = tag_dist(rng);
      }
      ex.tags.push_back(tag);
      std::vector<double> obs(static_cast<std::size_t>(d_obs));
      for (int f = 0; f < d_obs; ++f) {
        obs[static_cast<std::size_t>(f)] =
            means[static_cast<std::size_t>(tag)][static_cast<std::size_t>(f)] + gauss(rng);
      }
      ex.obs.push_back(std::move(obs));
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

}  // namespace slackmax
