#include "slackmax/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace slackmax {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::uint64_t parse_label_list(const std::string& field, char sep,
                               std::uint32_t d_labels, std::size_t lineno) {
  std::uint64_t mask = 0;
  if (field.empty()) return 0;
  for (const std::string& tok : split(field, sep)) {
    if (tok.empty()) throw ParseError(lineno, "empty label id");
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad label id '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError(lineno, "bad label id '" + tok + "'");
    if (d_labels && v >= d_labels) {
      throw ParseError(lineno, "label id " + tok + " >= declared d_labels");
    }
    if (v >= 64) throw ParseError(lineno, "label id " + tok + " exceeds 63");
    mask |= std::uint64_t{1} << v;
  }
  return mask;
}

}  // namespace

MultiLabelDataset parse_multilabel(const std::string& text, DatasetFormat format,
                                   std::uint32_t d_features,
                                   std::uint32_t d_labels) {
  MultiLabelDataset ds;
  ds.d_features = d_features;
  ds.d_labels = d_labels;
  std::uint32_t max_feature = 0;
  std::uint32_t max_label = 0;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank_or_comment(line)) continue;

    MultiLabelExample ex;
    if (format == DatasetFormat::SvmlightMultilabel) {
      std::istringstream ls(line);
      std::string field;
      ls >> field;
      ex.labels = parse_label_list(field, ',', d_labels, lineno);
      std::string pair;
      while (ls >> pair) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos) {
          throw ParseError(lineno, "expected feature:value, got '" + pair + "'");
        }
        unsigned long idx = 0;
        double val = 0.0;
        try {
          idx = std::stoul(pair.substr(0, colon));
          val = std::stod(pair.substr(colon + 1));
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad feature pair '" + pair + "'");
        }
        if (d_features && idx >= d_features) {
          throw ParseError(lineno, "feature index " + std::to_string(idx) +
                                       " >= declared d_features");
        }
        ex.features.emplace_back(static_cast<std::uint32_t>(idx), val);
      }
    } else {
      const auto fields = split(line, ',');
      ex.labels = parse_label_list(fields[0], '|', d_labels, lineno);
      for (std::size_t j = 1; j < fields.size(); ++j) {
        double val = 0.0;
        try {
          val = std::stod(fields[j]);
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad feature value '" + fields[j] + "'");
        }
        const auto idx = static_cast<std::uint32_t>(j - 1);
        if (d_features && idx >= d_features) {
          throw ParseError(lineno, "feature column " + std::to_string(idx) +
                                       " >= declared d_features");
        }
        if (val != 0.0) ex.features.emplace_back(idx, val);
      }
    }

    std::sort(ex.features.begin(), ex.features.end());
    for (const auto& [idx, _] : ex.features) max_feature = std::max(max_feature, idx + 1);
    for (std::uint32_t j = 0; j < 64; ++j) {
      if (ex.labels >> j & 1) max_label = std::max(max_label, j + 1);
    }
    ds.examples.push_back(std::move(ex));
  }
  if (!ds.d_features) ds.d_features = max_feature;
  if (!ds.d_labels) ds.d_labels = max_label;
  return ds;
}

MultiLabelDataset load_multilabel(const std::string& path, DatasetFormat format,
                                  std::uint32_t d_features,
                                  std::uint32_t d_labels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_multilabel(buf.str(), format, d_features, d_labels);
}

std::string serialize_multilabel(const MultiLabelDataset& ds) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& ex : ds.examples) {
    bool first = true;
    for (std::uint32_t j = 0; j < 64; ++j) {
      if (ex.labels >> j & 1) {
        if (!first) out << ',';
        out << j;
        first = false;
      }
    }
    for (const auto& [idx, val] : ex.features) out << ' ' << idx << ':' << val;
    out << '\n';
  }
  return out.str();
}

std::vector<int> load_taxonomy(const std::string& path, std::uint32_t d_labels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<int> parent(d_labels, -1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::istringstream ls(line);
    long child = -1, par = -1;
    if (!(ls >> child >> par)) throw ParseError(lineno, "expected 'child parent'");
    if (child < 0 || child >= static_cast<long>(d_labels) ||
        par < -1 || par >= static_cast<long>(d_labels)) {
      throw ParseError(lineno, "taxonomy index out of range");
    }
    parent[static_cast<std::size_t>(child)] = static_cast<int>(par);
  }
  return parent;
}

std::unique_ptr<EnumerationInstance> adversarial_instance(double eps,
                                                          double H_hat,
                                                          double G_hat) {
  if (!(eps > 0.0) || eps >= std::min(H_hat, G_hat) / 2.0) {
    throw std::invalid_argument("require 0 < eps < min(H,G)/2");
  }
  return enumeration_backend({{eps, G_hat}, {H_hat, eps}, {H_hat / 2.0, G_hat / 2.0}});
}

std::unique_ptr<EnumerationInstance> random_instance(std::size_t M,
                                                     PointDistribution dist,
                                                     std::uint64_t seed,
                                                     double h_max, double g_max) {
  if (M < 1) throw std::invalid_argument("M >= 1 required");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<LabelPoint> pts;
  pts.reserve(M);
  if (dist == PointDistribution::Uniform) {
    for (std::size_t i = 0; i < M; ++i) {
      // h strictly positive: map (0,1] via 1-u with u in [0,1)
      pts.push_back({(1.0 - unit(rng)) * h_max, unit(rng) * g_max});
    }
  } else {
    // Two clusters hugging the axes plus sparse interior points; mimics the
    // label clouds seen during training, where most labels have either a
    // small margin violation or a small error.
    std::normal_distribution<double> n01(0.0, 0.15);
    for (std::size_t i = 0; i < M; ++i) {
      double h, g;
      const double u = unit(rng);
      if (u < 0.45) {
        h = std::clamp(std::abs(n01(rng)), 1e-6, 1.0) * h_max;
        g = (0.5 + 0.5 * unit(rng)) * g_max;
      } else if (u < 0.9) {
        h = (0.5 + 0.5 * unit(rng)) * h_max;
        g = std::abs(n01(rng)) * g_max;
      } else {
        h = std::clamp(1.0 - unit(rng), 1e-6, 1.0) * h_max;
        g = unit(rng) * g_max;
      }
      pts.push_back({h, std::min(g, g_max)});
    }
  }
  return enumeration_backend(std::move(pts));
}

LabelPoint brute_force_max(const EnumerationInstance& inst) {
  LabelPoint best = inst.points().front();
  for (const auto& p : inst.points()) {
    if (phi(p) > phi(best)) best = p;
  }
  return best;
}

MultiLabelDataset synthetic_multilabel(std::size_t n, std::uint32_t d_features,
                                       std::uint32_t d_labels,
                                       std::uint64_t seed, double margin,
                                       double label_noise) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Ground-truth per-label weight rows.
  std::vector<std::vector<double>> w_true(d_labels,
                                          std::vector<double>(d_features));
  for (auto& row : w_true) {
    for (auto& v : row) v = gauss(rng);
  }

  MultiLabelDataset ds;
  ds.d_features = d_features;
  ds.d_labels = d_labels;
  while (ds.examples.size() < n) {
    std::vector<double> x(d_features);
    for (auto& v : x) v = gauss(rng);
    std::uint64_t labels = 0;
    bool ok = true;
    for (std::uint32_t j = 0; j < d_labels; ++j) {
      double s = 0.0;
      for (std::uint32_t k = 0; k < d_features; ++k) s += w_true[j][k] * x[k];
      if (std::abs(s) < margin) {
        ok = false;  // resample: every bit must clear the margin
        break;
      }
      if (s > 0.0) labels |= std::uint64_t{1} << j;
    }
    if (!ok) continue;
    if (label_noise > 0.0) {
      for (std::uint32_t j = 0; j < d_labels; ++j) {
        if (unit(rng) < label_noise) labels ^= std::uint64_t{1} << j;
      }
    }
    MultiLabelExample ex;
    ex.labels = labels;
    for (std::uint32_t k = 0; k < d_features; ++k) {
      ex.features.emplace_back(k, x[k]);
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

}  // namespace slackmax
