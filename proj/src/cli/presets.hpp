#pragma once

#include <functional>
#include <string>
#include <vector>

namespace reparamqm::cli {

struct PresetResult {
  bool passed = false;
  std::vector<std::string> lines;  // one human-readable check per entry
};

/// A named, self-checking scenario configuration. Each preset reproduces one
/// verification target at its pinned tolerance and reports pass/fail.
struct Preset {
  std::string name;
  std::string description;
  std::function<PresetResult(const std::string& outdir)> execute;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace reparamqm::cli
