#include "slackmax/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slackmax/dataset.hpp"

namespace slackmax {

namespace {
constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "slackmax-model";
}  // namespace

std::string checkpoint_to_json(const Checkpoint& cp) {
  nlohmann::json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["task"] = cp.task;
  j["d_features"] = cp.d_features;
  j["d_labels"] = cp.d_labels;
  j["C"] = cp.model.C;
  j["w"] = cp.model.w;
  return j.dump(2) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("bad checkpoint json: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kFormatName) {
    throw IoError("not a model checkpoint");
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw IoError("unsupported checkpoint version");
  }
  Checkpoint cp;
  try {
    cp.task = j.at("task").get<std::string>();
    cp.d_features = j.at("d_features").get<std::uint32_t>();
    cp.d_labels = j.at("d_labels").get<std::uint32_t>();
    cp.model.C = j.at("C").get<double>();
    cp.model.w = j.at("w").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad checkpoint fields: ") + e.what());
  }
  return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << checkpoint_to_json(cp);
  if (!out) throw IoError("short write to " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace slackmax
