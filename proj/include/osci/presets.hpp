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

#ifndef OSCI_PRESETS_HPP_
#define OSCI_PRESETS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "osci/config.hpp"

namespace osci {

struct Preset {
  std::string name;
  std::string description;
  // One experiment per part; multi-part presets label each part, and its
  // CSVs go to a subdirectory of that name.
  std::vector<ExperimentConfig> parts;
};

const std::vector<Preset>& all_presets();
// Throws ConfigError for unknown names.
const Preset& find_preset(std::string_view name);

// Parameters of rule C used by the presets. They are not taken from any
// published configuration; override them through a config file if needed.
inline constexpr double kRuleCDefaultTau0 = 200.0;
inline constexpr double kRuleCDefaultTau1 = 1.5;

}  // namespace osci

#endif  // OSCI_PRESETS_HPP_
