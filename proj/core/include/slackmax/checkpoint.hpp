#pragma once

#include <string>

#include "slackmax/model.hpp"

namespace slackmax {

// Versioned JSON model checkpoint. Task metadata travels with the weights
// so a loaded model can reject incompatible datasets.
struct Checkpoint {
  ModelState model;
  std::string task = "multilabel";  // or "chain"
  std::uint32_t d_features = 0;
  std::uint32_t d_labels = 0;
};

std::string checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace slackmax
