#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "slackmax/oracle.hpp"

namespace slackmax {

using SparseVec = std::vector<std::pair<std::uint32_t, double>>;

enum class SplitTag { Train, Holdout, Test };

struct MultiLabelExample {
  SparseVec features;
  std::uint64_t labels = 0;  // bit mask, bit j set = label j present
  SplitTag split = SplitTag::Train;
};

struct MultiLabelDataset {
  std::vector<MultiLabelExample> examples;
  std::uint32_t d_features = 0;
  std::uint32_t d_labels = 0;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason),
        line(line) {}
  std::size_t line;
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class DatasetFormat { SvmlightMultilabel, Csv };

// svmlight-multilabel: "l1,l2 f:v f:v" per line (labels comma-separated,
// then sparse feature:value pairs). CSV: first field pipe-separated label
// ids, remaining fields dense feature values.
// Pass d_features/d_labels = 0 to infer them from the data; when declared,
// out-of-range indices are a ParseError.
MultiLabelDataset load_multilabel(const std::string& path, DatasetFormat format,
                                  std::uint32_t d_features = 0,
                                  std::uint32_t d_labels = 0);

MultiLabelDataset parse_multilabel(const std::string& text, DatasetFormat format,
                                   std::uint32_t d_features = 0,
                                   std::uint32_t d_labels = 0);

// Canonical svmlight-multilabel serialization (sorted feature indices).
std::string serialize_multilabel(const MultiLabelDataset& ds);

// Parent index per label (-1 for roots), one "child parent" pair per line.
std::vector<int> load_taxonomy(const std::string& path, std::uint32_t d_labels);

// The 3-label family on which every lambda-oracle-only search fails:
// A = (eps, G), B = (H, eps), C = (H/2, G/2). The lambda-oracle returns
// A or B for every lambda, yet C attains phi = HG/4.
std::unique_ptr<EnumerationInstance> adversarial_instance(double eps,
                                                          double H_hat,
                                                          double G_hat);

enum class PointDistribution { Uniform, Clustered };

// M random points with h in (0, h_max], g in [0, g_max], deterministic
// per seed.
std::unique_ptr<EnumerationInstance> random_instance(
    std::size_t M, PointDistribution dist, std::uint64_t seed,
    double h_max = 1.0, double g_max = 1.0);

// Brute-force reference: max phi over an enumeration instance.
LabelPoint brute_force_max(const EnumerationInstance& inst);

// Separable synthetic multi-label data (used by training tests and the
// bundled fixture generator). Every example has per-bit margin >= margin.
MultiLabelDataset synthetic_multilabel(std::size_t n, std::uint32_t d_features,
                                       std::uint32_t d_labels,
                                       std::uint64_t seed, double margin = 0.5,
                                       double label_noise = 0.0);

}  // namespace slackmax
