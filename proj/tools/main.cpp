// Command-line front end: training, search benchmarking, the adversarial
// demonstration, and label-cloud emission for external plotting.
//
// Exit codes: 0 success, 2 usage/config error, 1 runtime error.
// Set SLACKMAX_LOG=debug|info|warn|error to control stderr logging.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "slackmax/checkpoint.hpp"
#include "slackmax/dataset.hpp"
#include "slackmax/metrics.hpp"
#include "slackmax/multilabel.hpp"
#include "slackmax/search.hpp"
#include "slackmax/training.hpp"

namespace {

using nlohmann::json;
namespace sm = slackmax;

enum class LogLevel { Debug = 0, Info, Warn, Error };

LogLevel g_log_level = [] {
  const char* v = std::getenv("SLACKMAX_LOG");
  if (!v) return LogLevel::Warn;
  const std::string s = v;
  if (s == "debug") return LogLevel::Debug;
  if (s == "info") return LogLevel::Info;
  if (s == "error") return LogLevel::Error;
  return LogLevel::Warn;
}();

void log_at(LogLevel lvl, const std::string& msg) {
  static const char* names[] = {"debug", "info", "warn", "error"};
  if (lvl >= g_log_level) {
    std::cerr << "[" << names[static_cast<int>(lvl)] << "] " << msg << "\n";
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

sm::DatasetFormat parse_format(const std::string& s) {
  if (s == "svmlight") return sm::DatasetFormat::SvmlightMultilabel;
  if (s == "csv") return sm::DatasetFormat::Csv;
  throw CLI::ValidationError("--format", "unknown format: " + s);
}

sm::SearchKind require_search(const std::string& s) {
  const auto k = sm::parse_search_kind(s);
  if (!k) throw CLI::ValidationError("--search", "unknown strategy: " + s);
  return *k;
}

sm::BackendKind parse_backend(const std::string& s) {
  if (s == "auto") return sm::BackendKind::Auto;
  if (s == "enumerate") return sm::BackendKind::Enumerate;
  if (s == "factorized") return sm::BackendKind::Factorized;
  throw CLI::ValidationError("--backend", "unknown backend: " + s);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sm::IoError("cannot write " + path);
  return out;
}

// ---------------------------------------------------------------- train

struct TrainOpts {
  std::string data, format = "svmlight", out_dir = ".", objective = "slack";
  std::string search = "bisecting", backend = "auto", taxonomy;
  double C = 1.0, eps = 1e-4, stop_ratio = 0.999;
  int epochs = 50, max_rounds = 100, max_queries = 100000, threads = 1;
  std::uint64_t seed = 1;
  bool timings = false;  // wall-time fields break byte-determinism; opt in
};

int cmd_train(const TrainOpts& o) {
  const auto ds = sm::load_multilabel(o.data, parse_format(o.format));
  if (ds.d_labels == 0) throw sm::IoError("dataset has no labels");
  std::vector<double> weights;
  if (!o.taxonomy.empty()) {
    weights = sm::taxonomy_loss_weights(sm::load_taxonomy(o.taxonomy, ds.d_labels));
  }
  const sm::MultilabelAdapter task(ds, weights);
  log_at(LogLevel::Info, "loaded " + std::to_string(ds.examples.size()) +
                             " examples, d_features=" +
                             std::to_string(ds.d_features) + ", d_labels=" +
                             std::to_string(ds.d_labels));

  sm::ModelState model;
  model.w.assign(task.feature_dim(), 0.0);
  model.C = o.C;

  sm::SearchConfig scfg;
  scfg.stop_ratio = o.stop_ratio;
  scfg.max_queries = o.max_queries;

  std::filesystem::create_directories(o.out_dir);
  auto history_out = open_out(o.out_dir + "/history.jsonl");

  if (o.objective == "slack" || o.objective == "margin") {
    sm::SgdConfig cfg;
    cfg.step_kind =
        o.objective == "slack" ? sm::StepKind::Slack : sm::StepKind::Margin;
    cfg.search = require_search(o.search);
    cfg.backend = parse_backend(o.backend);
    cfg.search_cfg = scfg;
    cfg.epochs = o.epochs;
    cfg.seed = o.seed;
    auto res = sm::sgd_train(std::move(model), task, cfg);
    model = std::move(res.model);
    for (const auto& r : res.history) {
      json j{{"epoch", r.epoch}, {"objective", r.objective}, {"queries", r.queries}};
      if (o.timings) j["seconds"] = r.seconds;
      history_out << j.dump() << "\n";
    }
  } else if (o.objective == "cutting-plane") {
    sm::CuttingPlaneConfig cfg;
    cfg.search = require_search(o.search);
    cfg.backend = parse_backend(o.backend);
    cfg.search_cfg = scfg;
    cfg.eps = o.eps;
    cfg.max_rounds = o.max_rounds;
    cfg.threads = o.threads;
    auto res = sm::cutting_plane_train(std::move(model), task, cfg);
    model = std::move(res.model);
    for (const auto& r : res.history) {
      history_out << json{{"round", r.round},
                          {"objective", r.objective},
                          {"added", r.added},
                          {"success_rate", r.success_rate},
                          {"mean_queries", r.mean_queries}}
                         .dump()
                  << "\n";
    }
  } else {
    throw CLI::ValidationError("--objective", "unknown objective: " + o.objective);
  }

  sm::Checkpoint cp;
  cp.model = model;
  cp.task = "multilabel";
  cp.d_features = ds.d_features;
  cp.d_labels = ds.d_labels;
  sm::save_checkpoint(cp, o.out_dir + "/model.json");

  const sm::MetricsReport m = sm::evaluate(model, task);
  auto metrics_out = open_out(o.out_dir + "/metrics.json");
  metrics_out << json{{"acc", m.acc},
                      {"label_loss", m.label_loss},
                      {"micro_f1", m.micro_f1},
                      {"macro_f1", m.macro_f1}}
                     .dump(2)
              << "\n";
  std::cout << "acc=" << fmt(m.acc) << " label_loss=" << fmt(m.label_loss)
            << " micro_f1=" << fmt(m.micro_f1) << " macro_f1=" << fmt(m.macro_f1)
            << "\n";
  return 0;
}

// --------------------------------------------------------- search-bench

struct BenchOpts {
  std::string out, dist = "uniform";
  int instances = 200, points = 100;
  std::uint64_t seed = 7;
  double xi = 0.0;
  bool adversarial = false;
  bool timings = false;
};

int cmd_search_bench(const BenchOpts& o) {
  const sm::PointDistribution dist = o.dist == "clustered"
                                         ? sm::PointDistribution::Clustered
                                         : sm::PointDistribution::Uniform;
  if (o.dist != "uniform" && o.dist != "clustered") {
    throw CLI::ValidationError("--dist", "unknown distribution: " + o.dist);
  }

  constexpr sm::SearchKind kinds[] = {
      sm::SearchKind::Angular, sm::SearchKind::Bisecting,
      sm::SearchKind::BinaryUpper, sm::SearchKind::Sarawagi};
  struct Row {
    long exact = 0, success = 0;
    double queries = 0.0, seconds = 0.0;
  };
  Row rows[4];

  for (int i = 0; i < o.instances; ++i) {
    std::unique_ptr<sm::EnumerationInstance> inst;
    if (o.adversarial) {
      inst = sm::adversarial_instance(1e-3, 1.0, 1.0);
    } else {
      inst = sm::random_instance(static_cast<std::size_t>(o.points), dist,
                                 o.seed + static_cast<std::uint64_t>(i));
    }
    const double phi_star = sm::phi(sm::brute_force_max(*inst));
    for (int k = 0; k < 4; ++k) {
      sm::SearchConfig scfg;
      const auto t0 = std::chrono::steady_clock::now();
      const sm::SearchOutcome out = sm::run_search(kinds[k], *inst, o.xi, scfg);
      rows[k].seconds +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      rows[k].queries += out.queries;
      if (out.best_phi > o.xi + 1e-12) rows[k].success += 1;
      if (phi_star <= 0.0
              ? out.best_phi <= 0.0
              : std::abs(out.best_phi - phi_star) <= 1e-9 * phi_star) {
        rows[k].exact += 1;
      }
    }
  }

  const double n = static_cast<double>(o.instances);
  std::string csv = o.timings
                        ? "search,success_rate,exact_rate,mean_queries,mean_seconds\n"
                        : "search,success_rate,exact_rate,mean_queries\n";
  std::printf("%-10s %12s %12s %14s\n", "search", "success", "exact",
              "mean queries");
  for (int k = 0; k < 4; ++k) {
    const std::string name = sm::search_kind_name(kinds[k]);
    const double sr = rows[k].success / n;
    const double er = rows[k].exact / n;
    const double mq = rows[k].queries / n;
    std::printf("%-10s %12.4f %12.4f %14.2f\n", name.c_str(), sr, er, mq);
    csv += name + "," + fmt(sr) + "," + fmt(er) + "," + fmt(mq);
    if (o.timings) csv += "," + fmt(rows[k].seconds / n);
    csv += "\n";
  }
  if (!o.out.empty()) open_out(o.out) << csv;
  return 0;
}

// ----------------------------------------------------- adversarial-demo

int cmd_adversarial_demo(double eps, double H, double G) {
  const auto inst = sm::adversarial_instance(eps, H, G);
  const double phi_star = sm::phi(sm::brute_force_max(*inst));
  std::printf("points: A=(%s,%s) B=(%s,%s) C=(%s,%s), phi* = %s\n", fmt(eps).c_str(),
              fmt(G).c_str(), fmt(H).c_str(), fmt(eps).c_str(), fmt(H / 2).c_str(),
              fmt(G / 2).c_str(), fmt(phi_star).c_str());
  std::printf("%-10s %14s %10s %10s\n", "search", "phi", "queries", "gap");
  for (const auto k : {sm::SearchKind::Sarawagi, sm::SearchKind::BinaryUpper,
                       sm::SearchKind::Bisecting, sm::SearchKind::Angular}) {
    sm::SearchConfig scfg;
    const sm::SearchOutcome out = sm::run_search(k, *inst, 0.0, scfg);
    std::printf("%-10s %14s %10d %10s\n", sm::search_kind_name(k).c_str(),
                fmt(out.best_phi).c_str(), out.queries,
                fmt(phi_star - out.best_phi).c_str());
  }
  return 0;
}

// --------------------------------------------------------- emit-points

struct EmitOpts {
  std::string model, data, format = "svmlight", out;
  std::size_t example = 0;
};

int cmd_emit_points(const EmitOpts& o) {
  const sm::Checkpoint cp = sm::load_checkpoint(o.model);
  if (cp.task != "multilabel") throw sm::IoError("unsupported task: " + cp.task);
  const auto ds =
      sm::load_multilabel(o.data, parse_format(o.format), cp.d_features, cp.d_labels);
  if (o.example >= ds.examples.size()) {
    throw sm::IoError("example index out of range");
  }
  const sm::MultilabelAdapter task(ds);
  const auto inst = task.make_instance(cp.model, o.example, sm::BackendKind::Enumerate);
  const auto* e = dynamic_cast<const sm::EnumerationInstance*>(inst.get());
  if (!e) throw sm::IoError("backend cannot enumerate labels");

  std::string csv = "label,h,g\n";
  for (sm::LabelId id = 0; id < e->points().size(); ++id) {
    if (e->gold() && *e->gold() == id) continue;  // gold carries no violation
    const sm::LabelPoint& p = e->point_of(id);
    csv += std::to_string(id) + "," + fmt(p.h) + "," + fmt(p.g) + "\n";
  }
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    open_out(o.out) << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slack-rescaled structural-SVM training and violation search"};
  app.require_subcommand(1);

  TrainOpts topt;
  auto* train = app.add_subcommand(
      "train", "Train a multi-label model; writes model.json, history.jsonl "
               "(one record per epoch/round), metrics.json");
  train->add_option("--data", topt.data, "dataset path")->required();
  train->add_option("--format", topt.format, "svmlight | csv");
  train->add_option("--out", topt.out_dir, "output directory");
  train->add_option("--objective", topt.objective, "slack | margin | cutting-plane");
  train->add_option("--search", topt.search,
                    "angular | bisecting | binary | sarawagi");
  train->add_option("--backend", topt.backend, "auto | enumerate | factorized");
  train->add_option("--taxonomy", topt.taxonomy, "label taxonomy (child parent lines)");
  train->add_option("--C", topt.C, "regularization");
  train->add_option("--epochs", topt.epochs, "SGD epochs");
  train->add_option("--eps", topt.eps, "cutting-plane violation slack");
  train->add_option("--max-rounds", topt.max_rounds, "cutting-plane rounds");
  train->add_option("--stop-ratio", topt.stop_ratio, "search stop ratio");
  train->add_option("--max-queries", topt.max_queries, "per-search query budget");
  train->add_option("--threads", topt.threads, "cutting-plane search threads");
  train->add_option("--seed", topt.seed, "shuffle seed");
  train->add_flag("--timings", topt.timings,
                  "include wall-time fields (breaks byte-determinism)");

  BenchOpts bopt;
  auto* bench = app.add_subcommand(
      "search-bench",
      "Run all four searches on a seeded ensemble; CSV columns: "
      "search,success_rate,exact_rate,mean_queries[,mean_seconds]");
  bench->add_option("--instances", bopt.instances, "ensemble size")
      ->check(CLI::PositiveNumber);
  bench->add_option("--points", bopt.points, "labels per instance")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bopt.seed, "ensemble seed");
  bench->add_option("--dist", bopt.dist, "uniform | clustered");
  bench->add_option("--xi", bopt.xi, "slack threshold for success");
  bench->add_flag("--adversarial", bopt.adversarial,
                  "use the 3-point adversarial family instead");
  bench->add_flag("--timings", bopt.timings, "include mean_seconds column");
  bench->add_option("--out", bopt.out, "CSV output path");

  double d_eps = 1e-3, d_H = 1.0, d_G = 1.0;
  auto* demo = app.add_subcommand(
      "adversarial-demo",
      "Show all four searches on the instance where lambda-oracle searches fail");
  demo->add_option("--eps", d_eps, "corner offset")->check(CLI::PositiveNumber);
  demo->add_option("--H", d_H, "max h")->check(CLI::PositiveNumber);
  demo->add_option("--G", d_G, "max g")->check(CLI::PositiveNumber);

  EmitOpts eopt;
  auto* emit = app.add_subcommand(
      "emit-points", "Emit (h, g) of every non-gold label of one example as "
                     "CSV (label,h,g)");
  emit->add_option("--model", eopt.model, "model checkpoint")->required();
  emit->add_option("--data", eopt.data, "dataset path")->required();
  emit->add_option("--format", eopt.format, "svmlight | csv");
  emit->add_option("--example", eopt.example, "example index");
  emit->add_option("--out", eopt.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*train) return cmd_train(topt);
    if (*bench) return cmd_search_bench(bopt);
    if (*demo) return cmd_adversarial_demo(d_eps, d_H, d_G);
    if (*emit) return cmd_emit_points(eopt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log_at(LogLevel::Error, e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
