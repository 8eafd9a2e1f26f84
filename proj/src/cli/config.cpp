#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace reparamqm::cli {

namespace {

const std::map<std::string, Scenario>& scenario_names() {
  static const std::map<std::string, Scenario> names{
      {"evolve-nonrel", Scenario::EvolveNonrel},
      {"evolve-sqrt", Scenario::EvolveSqrt},
      {"evolve-kg", Scenario::EvolveKg},
      {"kg-equivalence", Scenario::KgEquivalence},
      {"nonrel-limit-scan", Scenario::NonrelLimitScan},
      {"ri-constraint", Scenario::RiConstraint},
      {"gauge-invariance", Scenario::GaugeInvariance},
      {"uncertainty", Scenario::Uncertainty},
  };
  return names;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(parsed)) {
      throw std::invalid_argument("");
    }
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a finite number: '" + value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  long parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": not an integer: '" + value + "'");
  }
  return parsed;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  std::uint64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": not a nonnegative integer: '" + value + "'");
  }
  return parsed;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string trimmed = trim(item);
    if (!trimmed.empty()) items.push_back(trimmed);
  }
  return items;
}

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scenario",
      "grid.n",
      "grid.length",
      "constants.hbar",
      "constants.c",
      "constants.mass",
      "initial.kind",
      "initial.center",
      "initial.width",
      "initial.momentum",
      "initial.mode",
      "initial.path",
      "potential.kind",
      "potential.strength",
      "potential.center",
      "time.dt",
      "time.steps",
      "time.stride",
      "output.directory",
      "output.formats",
      "seed",
      "scan.c_values",
      "mechanics.model",
      "equivalence.band_fraction",
  };
  return keys;
}

bool needs_grid(Scenario s) {
  return s != Scenario::RiConstraint && s != Scenario::GaugeInvariance;
}

bool needs_initial(Scenario s) {
  return s == Scenario::EvolveNonrel || s == Scenario::EvolveSqrt ||
         s == Scenario::EvolveKg || s == Scenario::Uncertainty;
}

bool needs_time(Scenario s) { return s != Scenario::Uncertainty; }

void validate(ExperimentConfig& cfg) {
  if (needs_grid(cfg.scenario)) {
    if (cfg.grid_n == 0) throw ConfigError("grid.n: required");
    if (cfg.grid_length == 0.0) throw ConfigError("grid.length: required");
  }
  if (cfg.grid_n != 0) {
    if (cfg.grid_n < 8 || cfg.grid_n > (1 << 24) ||
        (cfg.grid_n & (cfg.grid_n - 1)) != 0) {
      throw ConfigError("grid.n: must be a power of two in [8, 2^24]");
    }
  }
  if (cfg.potential_kind != PotentialKind::None &&
      cfg.scenario != Scenario::EvolveNonrel) {
    throw ConfigError(
        "potential.kind: only the evolve-nonrel scenario supports a "
        "potential");
  }
  if (cfg.grid_length < 0.0) {
    throw ConfigError("grid.length: must be positive");
  }
  if (!(cfg.hbar > 0.0)) throw ConfigError("constants.hbar: must be positive");
  if (!(cfg.c > 0.0)) throw ConfigError("constants.c: must be positive");
  if (!(cfg.mass > 0.0)) throw ConfigError("constants.mass: must be positive");

  if (needs_initial(cfg.scenario)) {
    switch (cfg.initial_kind) {
      case InitialKind::Unset:
        throw ConfigError("initial.kind: required");
      case InitialKind::Gaussian:
        if (!(cfg.initial_width > 0.0)) {
          throw ConfigError("initial.width: must be positive");
        }
        break;
      case InitialKind::PlaneWave:
        if (std::abs(cfg.initial_mode) > cfg.grid_n / 2) {
          throw ConfigError("initial.mode: outside the grid band |j| <= n/2");
        }
        break;
      case InitialKind::CustomFile:
        if (cfg.initial_path.empty()) {
          throw ConfigError("initial.path: required for custom-file");
        }
        break;
    }
  }

  if (needs_time(cfg.scenario)) {
    if (!(cfg.dt > 0.0)) throw ConfigError("time.dt: required and positive");
    if (cfg.steps < 0) throw ConfigError("time.steps: required");
  }
  if (cfg.stride < 0) throw ConfigError("time.stride: must be positive");
  if (cfg.stride > 0 && cfg.steps > 0 && cfg.steps % cfg.stride != 0) {
    throw ConfigError("time.stride: must divide time.steps");
  }

  if (cfg.scenario == Scenario::NonrelLimitScan) {
    if (cfg.scan_c_values.empty()) {
      throw ConfigError("scan.c_values: needs at least one value");
    }
    for (double c : cfg.scan_c_values) {
      if (!(c > 0.0)) throw ConfigError("scan.c_values: entries must be positive");
    }
  }
  static const std::set<std::string> models{"free", "harmonic", "relativistic",
                                            "all"};
  if (!models.count(cfg.mechanics_model)) {
    throw ConfigError(
        "mechanics.model: must be one of free, harmonic, relativistic, all");
  }
  if (!(cfg.band_fraction > 0.0) || cfg.band_fraction >= 0.5) {
    throw ConfigError("equivalence.band_fraction: must lie in (0, 0.5)");
  }
}

}  // namespace

std::string to_string(Scenario scenario) {
  for (const auto& [name, value] : scenario_names()) {
    if (value == scenario) return name;
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  const auto it = scenario_names().find(name);
  if (it == scenario_names().end()) {
    std::string known;
    for (const auto& [known_name, value] : scenario_names()) {
      if (!known.empty()) known += ", ";
      known += known_name;
    }
    throw ConfigError("scenario: unknown value '" + name + "' (expected one of " +
                      known + ")");
  }
  return it->second;
}

long ExperimentConfig::resolved_stride() const {
  if (stride > 0) return stride;
  return steps > 0 ? steps : 1;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> raw;
  std::stringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = unquote(trim(stripped.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_number) + ": empty key");
    }
    if (!known_keys().count(key)) {
      throw ConfigError("unknown key '" + key + "'");
    }
    if (raw.count(key)) {
      throw ConfigError("duplicate key '" + key + "'");
    }
    raw.emplace(key, value);
  }

  if (!raw.count("scenario")) throw ConfigError("scenario: required");

  ExperimentConfig cfg;
  cfg.scenario = scenario_from_string(raw.at("scenario"));

  auto take = [&raw](const char* key) -> const std::string* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };

  if (const auto* v = take("grid.n")) {
    const long parsed = parse_long("grid.n", *v);
    if (parsed < 0 || parsed > (1 << 24)) {
      throw ConfigError("grid.n: must be a power of two in [8, 2^24]");
    }
    cfg.grid_n = static_cast<int>(parsed);
  }
  if (const auto* v = take("grid.length")) {
    cfg.grid_length = parse_double("grid.length", *v);
  }
  if (const auto* v = take("constants.hbar")) {
    cfg.hbar = parse_double("constants.hbar", *v);
  }
  if (const auto* v = take("constants.c")) {
    cfg.c = parse_double("constants.c", *v);
  }
  if (const auto* v = take("constants.mass")) {
    cfg.mass = parse_double("constants.mass", *v);
  }
  if (const auto* v = take("initial.kind")) {
    if (*v == "gaussian") {
      cfg.initial_kind = InitialKind::Gaussian;
    } else if (*v == "plane-wave") {
      cfg.initial_kind = InitialKind::PlaneWave;
    } else if (*v == "custom-file") {
      cfg.initial_kind = InitialKind::CustomFile;
    } else {
      throw ConfigError(
          "initial.kind: must be one of gaussian, plane-wave, custom-file");
    }
  }
  if (const auto* v = take("initial.center")) {
    cfg.initial_center = parse_double("initial.center", *v);
  }
  if (const auto* v = take("initial.width")) {
    cfg.initial_width = parse_double("initial.width", *v);
  }
  if (const auto* v = take("initial.momentum")) {
    cfg.initial_momentum = parse_double("initial.momentum", *v);
  }
  if (const auto* v = take("initial.mode")) {
    cfg.initial_mode = static_cast<int>(parse_long("initial.mode", *v));
  }
  if (const auto* v = take("initial.path")) cfg.initial_path = *v;
  if (const auto* v = take("potential.kind")) {
    if (*v == "none") {
      cfg.potential_kind = PotentialKind::None;
    } else if (*v == "harmonic") {
      cfg.potential_kind = PotentialKind::Harmonic;
    } else {
      throw ConfigError("potential.kind: must be one of none, harmonic");
    }
  }
  if (const auto* v = take("potential.strength")) {
    cfg.potential_strength = parse_double("potential.strength", *v);
  }
  if (const auto* v = take("potential.center")) {
    cfg.potential_center = parse_double("potential.center", *v);
  }
  if (const auto* v = take("time.dt")) cfg.dt = parse_double("time.dt", *v);
  if (const auto* v = take("time.steps")) {
    cfg.steps = parse_long("time.steps", *v);
  }
  if (const auto* v = take("time.stride")) {
    cfg.stride = parse_long("time.stride", *v);
    if (cfg.stride <= 0) throw ConfigError("time.stride: must be positive");
  }
  if (const auto* v = take("output.directory")) cfg.output_directory = *v;
  if (const auto* v = take("output.formats")) {
    cfg.format_csv = false;
    cfg.format_json = false;
    for (const std::string& item : split_list(*v)) {
      if (item == "csv") {
        cfg.format_csv = true;
      } else if (item == "json") {
        cfg.format_json = true;
      } else {
        throw ConfigError("output.formats: unknown format '" + item + "'");
      }
    }
    if (!cfg.format_csv && !cfg.format_json) {
      throw ConfigError("output.formats: needs at least one of csv, json");
    }
  }
  if (const auto* v = take("seed")) cfg.seed = parse_seed("seed", *v);
  if (const auto* v = take("scan.c_values")) {
    cfg.scan_c_values.clear();
    for (const std::string& item : split_list(*v)) {
      cfg.scan_c_values.push_back(parse_double("scan.c_values", item));
    }
  }
  if (const auto* v = take("mechanics.model")) cfg.mechanics_model = *v;
  if (const auto* v = take("equivalence.band_fraction")) {
    cfg.band_fraction = parse_double("equivalence.band_fraction", *v);
  }

  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  // Emits the scenario plus every field that differs from its default, so
  // parse(serialize(cfg)) == cfg for every valid config.
  const ExperimentConfig def;
  std::ostringstream out;
  out << "scenario = \"" << to_string(cfg.scenario) << "\"\n";
  if (cfg.grid_n != def.grid_n) out << "grid.n = " << cfg.grid_n << "\n";
  if (cfg.grid_length != def.grid_length) {
    out << "grid.length = " << format_number(cfg.grid_length) << "\n";
  }
  if (cfg.hbar != def.hbar) {
    out << "constants.hbar = " << format_number(cfg.hbar) << "\n";
  }
  if (cfg.c != def.c) out << "constants.c = " << format_number(cfg.c) << "\n";
  if (cfg.mass != def.mass) {
    out << "constants.mass = " << format_number(cfg.mass) << "\n";
  }
  switch (cfg.initial_kind) {
    case InitialKind::Unset:
      break;
    case InitialKind::Gaussian:
      out << "initial.kind = \"gaussian\"\n";
      break;
    case InitialKind::PlaneWave:
      out << "initial.kind = \"plane-wave\"\n";
      break;
    case InitialKind::CustomFile:
      out << "initial.kind = \"custom-file\"\n";
      break;
  }
  if (cfg.initial_center != def.initial_center) {
    out << "initial.center = " << format_number(cfg.initial_center) << "\n";
  }
  if (cfg.initial_width != def.initial_width) {
    out << "initial.width = " << format_number(cfg.initial_width) << "\n";
  }
  if (cfg.initial_momentum != def.initial_momentum) {
    out << "initial.momentum = " << format_number(cfg.initial_momentum) << "\n";
  }
  if (cfg.initial_mode != def.initial_mode) {
    out << "initial.mode = " << cfg.initial_mode << "\n";
  }
  if (cfg.initial_path != def.initial_path) {
    out << "initial.path = \"" << cfg.initial_path << "\"\n";
  }
  if (cfg.potential_kind == PotentialKind::Harmonic) {
    out << "potential.kind = \"harmonic\"\n";
  }
  if (cfg.potential_strength != def.potential_strength) {
    out << "potential.strength = " << format_number(cfg.potential_strength)
        << "\n";
  }
  if (cfg.potential_center != def.potential_center) {
    out << "potential.center = " << format_number(cfg.potential_center) << "\n";
  }
  if (cfg.dt != def.dt) out << "time.dt = " << format_number(cfg.dt) << "\n";
  if (cfg.steps != def.steps) out << "time.steps = " << cfg.steps << "\n";
  if (cfg.stride != def.stride) out << "time.stride = " << cfg.stride << "\n";
  if (cfg.output_directory != def.output_directory) {
    out << "output.directory = \"" << cfg.output_directory << "\"\n";
  }
  if (cfg.format_csv != def.format_csv || cfg.format_json != def.format_json) {
    out << "output.formats = \""
        << (cfg.format_csv && cfg.format_json
                ? "csv,json"
                : (cfg.format_csv ? "csv" : "json"))
        << "\"\n";
  }
  if (cfg.seed != def.seed) out << "seed = " << cfg.seed << "\n";
  if (cfg.scan_c_values != def.scan_c_values) {
    out << "scan.c_values = \"";
    for (size_t i = 0; i < cfg.scan_c_values.size(); ++i) {
      if (i > 0) out << ",";
      out << format_number(cfg.scan_c_values[i]);
    }
    out << "\"\n";
  }
  if (cfg.mechanics_model != def.mechanics_model) {
    out << "mechanics.model = \"" << cfg.mechanics_model << "\"\n";
  }
  if (cfg.band_fraction != def.band_fraction) {
    out << "equivalence.band_fraction = " << format_number(cfg.band_fraction)
        << "\n";
  }
  return out.str();
}

}  // namespace reparamqm::cli
