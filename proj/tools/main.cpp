#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli/config.hpp"
#include "cli/presets.hpp"
#include "cli/scenarios.hpp"

namespace cli = reparamqm::cli;

int main(int argc, char** argv) {
  CLI::App app{
      "reparam_qm: spectral simulator for the square-root and Klein-Gordon "
      "wave equations and reparametrization-invariant classical mechanics"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run a scenario from a config file");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "Path to the config file")
      ->required();
  std::string out_override;
  run_cmd->add_option("--out", out_override, "Override output.directory");
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  run_cmd->add_option("--seed", seed_override, "Override the config seed")
      ->each([&seed_given](const std::string&) { seed_given = true; });

  auto* presets_cmd =
      app.add_subcommand("presets", "List or run the built-in presets");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
  auto* preset_run_cmd =
      presets_cmd->add_subcommand("run", "Run one preset and check it");
  std::string preset_name;
  preset_run_cmd->add_option("name", preset_name, "Preset name")->required();
  std::string preset_out = "out";
  preset_run_cmd->add_option("--out", preset_out, "Output root directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) {
      cli::ExperimentConfig config = cli::parse_config_file(config_path);
      if (!out_override.empty()) config.output_directory = out_override;
      if (seed_given) config.seed = seed_override;
      const cli::RunManifest manifest = cli::run(config);
      if (!manifest.ok) {
        std::cerr << "scenario failed: " << manifest.error << "\n";
        std::cerr << "manifest written to " << config.output_directory
                  << "/manifest.json\n";
        return 2;
      }
      std::cout << "scenario " << cli::to_string(config.scenario)
                << " finished in " << manifest.duration_seconds << " s\n";
      for (const auto& [name, value] : manifest.metrics) {
        std::cout << "  " << name << " = " << cli::format_double(value) << "\n";
      }
      std::cout << "outputs in " << config.output_directory << "\n";
      return 0;
    }

    if (list_cmd->parsed()) {
      for (const cli::Preset& preset : cli::presets()) {
        std::cout << preset.name << "\n    " << preset.description << "\n";
      }
      return 0;
    }

    if (preset_run_cmd->parsed()) {
      const cli::Preset* preset = cli::find_preset(preset_name);
      if (preset == nullptr) {
        std::cerr << "unknown preset '" << preset_name
                  << "' (see: reparam_qm presets list)\n";
        return 1;
      }
      const cli::PresetResult result =
          preset->execute(preset_out + "/" + preset->name);
      std::cout << preset->name << ": " << (result.passed ? "PASS" : "FAIL")
                << "\n";
      for (const std::string& line : result.lines) std::cout << line << "\n";
      return result.passed ? 0 : 2;
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
