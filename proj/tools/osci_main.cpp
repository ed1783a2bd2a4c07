// Copyright 2026 The osci Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: runs experiment configs and presets, searches for
// symmetry witnesses, and lists the presets.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "osci/config.hpp"
#include "osci/oracle.hpp"
#include "osci/presets.hpp"
#include "osci/runner.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Overrides {
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--replicates", o.replicates, "Number of Monte Carlo replicates")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Base seed of the data streams");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--threads", o.threads, "Worker threads (default: SCL_THREADS, then all cores)")
      ->check(CLI::PositiveNumber);
}

void apply(const Overrides& o, osci::ExperimentConfig& cfg) {
  if (o.replicates) cfg.replicates = *o.replicates;
  if (o.seed) cfg.data.seed = *o.seed;
  if (o.out) cfg.output_path = *o.out;
}

int run_all(std::vector<osci::ExperimentConfig> parts, const Overrides& o) {
  for (auto& cfg : parts) {
    apply(o, cfg);
    cfg.validate();
  }
  osci::RunOptions options;
  options.threads = osci::resolve_threads(o.threads);
  // Check every destination before spending time on any part.
  for (const auto& cfg : parts) osci::ensure_writable(osci::output_dir(cfg));
  for (const auto& cfg : parts) {
    const auto result = osci::simulate(cfg, options);
    const std::string dir = osci::output_dir(cfg);
    osci::write_results(cfg, result, dir);
    for (const auto& m : result.methods) {
      std::printf("wrote %s/%s.csv", dir.c_str(), m.name.c_str());
      if (m.is_baseline) std::printf(" (invariant violations: %zu)", m.invariant_violations);
      std::printf("\n");
    }
  }
  return 0;
}

int run_oracle(const std::string& path, const Overrides& o) {
  auto search = osci::load_witness_search(path);
  if (o.seed) search.seed = *o.seed;
  const auto result = osci::search_witness(search);
  if (result.witness) {
    std::printf("%s", osci::witness_to_json(*result.witness).c_str());
  } else {
    std::printf("no witness for %s in %zu trials (%zu instances with a selected test point)\n",
                search.strategy.name().c_str(), result.trials_run, result.instances_checked);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online selective conformal inference experiments"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;
  std::string preset_name;

  auto* run = app.add_subcommand("run", "Run an experiment config file");
  run->add_option("config", config_path, "JSON experiment config")->required();
  add_overrides(run, overrides);

  auto* preset = app.add_subcommand("preset", "Run a built-in preset (illustration1..illustration7)");
  preset->add_option("name", preset_name, "Preset name")->required();
  add_overrides(preset, overrides);

  auto* oracle = app.add_subcommand("oracle", "Search for a symmetry witness described by a config file");
  oracle->add_option("config", config_path, "JSON witness-search config")->required();
  oracle->add_option("--seed", overrides.seed, "Override the search seed");

  auto* list = app.add_subcommand("list-presets", "List the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_all({osci::load_experiment_config(config_path)}, overrides);
    if (*preset) return run_all(osci::find_preset(preset_name).parts, overrides);
    if (*oracle) return run_oracle(config_path, overrides);
    if (*list) {
      for (const auto& p : osci::all_presets()) std::printf("%-14s %s\n", p.name.c_str(), p.description.c_str());
      return 0;
    }
  } catch (const osci::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
