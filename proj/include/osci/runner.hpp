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

#ifndef OSCI_RUNNER_HPP_
#define OSCI_RUNNER_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "osci/config.hpp"
#include "osci/engine.hpp"
#include "osci/metrics.hpp"

namespace osci {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::size_t threads = 1;
  // Replicates per work unit. Chunks are reduced in index order, so the
  // output does not depend on the thread count.
  std::size_t chunk_size = 64;
};

// --threads if given, else SCL_THREADS, else the hardware concurrency.
std::size_t resolve_threads(std::optional<std::size_t> flag);

struct MethodResult {
  std::string name;
  bool is_baseline = false;
  MetricsFrame frame;
  // Replicates on which the baseline's per-trajectory guarantee failed
  // (LORD-CI wealth invariant or the ACI bound); zero for strategies.
  std::size_t invariant_violations = 0;
};

struct ExperimentResult {
  std::vector<MethodResult> methods;
};

// Trajectories of replicate r, one per method (strategies first, then
// baselines, in config order).
std::vector<Trajectory> run_replicate(const ExperimentConfig& cfg, std::uint64_t r);

ExperimentResult simulate(const ExperimentConfig& cfg, const RunOptions& options);

// CSV with columns t,strategy,metric,value,stderr,n_replicates.
std::string method_csv(const ExperimentConfig& cfg, const MethodResult& method);
std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& result);

// Creates `dir` if needed and checks that files can be written there.
void ensure_writable(const std::string& dir);
// Writes <dir>/<method>.csv for every method and <dir>/summary.json.
void write_results(const ExperimentConfig& cfg, const ExperimentResult& result, const std::string& dir);

// ensure_writable, simulate, write_results.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options);

// Output directory of a config: output_path, plus the label when present.
std::string output_dir(const ExperimentConfig& cfg);

}  // namespace osci

#endif  // OSCI_RUNNER_HPP_
