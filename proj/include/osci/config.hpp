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

#ifndef OSCI_CONFIG_HPP_
#define OSCI_CONFIG_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "osci/baselines.hpp"
#include "osci/data.hpp"
#include "osci/oracle.hpp"
#include "osci/selection.hpp"
#include "osci/strategies.hpp"

namespace osci {

// Which online times produce metric rows: every time (FCR over the stream)
// or only the final one (one coverage event per replicate).
enum class Evaluation { kEveryTime, kTerminal };

struct BaselineSpec {
  enum class Kind { kLord, kAci };

  Kind kind = Kind::kLord;
  double w0 = 0.0;  // LORD-CI initial wealth; zero means alpha / 2
  double gamma_step = 0.01;
  AciState::Clip clip = AciState::Clip::kNone;

  // "LORD_CI", or "ACI_<gamma_step>" so that several step sizes can run side by side.
  std::string name() const;
};

struct ExperimentConfig {
  std::string label;  // subdirectory for multi-part presets; empty otherwise
  DataGenConfig data;
  SelectionRule rule{RuleSpec::constant_one()};
  std::vector<StrategyKind> strategies;
  std::vector<BaselineSpec> baselines;
  double alpha = 0.1;
  std::size_t replicates = 1;
  std::string output_path = "out";
  Evaluation evaluation = Evaluation::kEveryTime;

  void validate() const;
  std::size_t method_count() const { return strategies.size() + baselines.size(); }
};

// Parses the JSON experiment schema. Errors are ConfigError with a message
// of the form "<source>:<line>: <what>".
ExperimentConfig parse_experiment_config(std::string_view text, const std::string& source);
ExperimentConfig load_experiment_config(const std::string& path);

// Parses the oracle search schema (see README).
WitnessSearch parse_witness_search(std::string_view text, const std::string& source);
WitnessSearch load_witness_search(const std::string& path);

std::string evaluation_name(Evaluation e);

// Witness fixtures: the instance (features, rule, strategy) together with
// the permutation and both augmented index sets.
std::string witness_to_json(const SymmetryWitness& witness);
SymmetryWitness parse_witness(std::string_view text, const std::string& source);

// JSON form of a selection rule, as accepted under "rule".
std::string rule_to_json(const SelectionRule& rule);

}  // namespace osci

#endif  // OSCI_CONFIG_HPP_
