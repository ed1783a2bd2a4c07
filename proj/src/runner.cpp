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

#include "osci/runner.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "osci/baselines.hpp"
#include "osci/data.hpp"

namespace osci {

namespace {

struct ChunkResult {
  std::vector<MetricsAccumulator> acc;
  std::vector<std::size_t> violations;
};

std::size_t lengths_from(const ExperimentConfig& cfg) {
  return cfg.evaluation == Evaluation::kTerminal ? cfg.data.n_on - 1 : 0;
}

ChunkResult run_chunk(const ExperimentConfig& cfg, std::size_t begin, std::size_t end) {
  ChunkResult out;
  const std::size_t methods = cfg.method_count();
  out.acc.assign(methods, MetricsAccumulator(cfg.data.n_on, lengths_from(cfg)));
  out.violations.assign(methods, 0);
  const Level alpha(cfg.alpha);
  for (std::size_t r = begin; r < end; ++r) {
    const auto trajs = run_replicate(cfg, r);
    for (std::size_t m = 0; m < methods; ++m) {
      out.acc[m].add(trajs[m]);
      if (m < cfg.strategies.size()) continue;
      const auto& b = cfg.baselines[m - cfg.strategies.size()];
      const bool ok = b.kind == BaselineSpec::Kind::kLord ? lord_invariant_holds(trajs[m], alpha)
                                                          : aci_bound_holds(trajs[m], alpha, b.gamma_step);
      if (!ok) ++out.violations[m];
    }
  }
  return out;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void row(std::string& out, std::size_t t, const std::string& method, const char* metric, std::optional<double> value,
         std::optional<double> stderr_, std::size_t n) {
  out += std::to_string(t);
  out += ',';
  out += method;
  out += ',';
  out += metric;
  out += ',';
  out += value ? format_number(*value) : "NA";
  out += ',';
  out += stderr_ ? format_number(*stderr_) : "NA";
  out += ',';
  out += std::to_string(n);
  out += '\n';
}

void estimate_row(std::string& out, std::size_t t, const std::string& method, const char* metric,
                  const std::optional<Estimate>& e) {
  if (e) {
    row(out, t, method, metric, e->value, e->stderr_, e->n);
  } else {
    row(out, t, method, metric, std::nullopt, std::nullopt, 0);
  }
}

}  // namespace

std::size_t resolve_threads(std::optional<std::size_t> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("SCL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<Trajectory> run_replicate(const ExperimentConfig& cfg, std::uint64_t r) {
  const Level alpha(cfg.alpha);
  const ScoreFunction score_fn = model_score(cfg.data);
  const ScoredStream stream(generate_dataset(cfg.data, r), score_fn);
  std::vector<Trajectory> out;
  out.reserve(cfg.method_count());
  for (const auto& s : cfg.strategies) out.push_back(run_stream(stream, cfg.rule, s, alpha, score_fn));
  for (const auto& b : cfg.baselines) {
    if (b.kind == BaselineSpec::Kind::kLord) {
      LordParams p;
      p.w0 = b.w0;
      out.push_back(run_lord(stream, cfg.rule, alpha, p, score_fn));
    } else {
      AciParams p;
      p.gamma_step = b.gamma_step;
      p.clip = b.clip;
      out.push_back(run_aci(stream, cfg.rule, alpha, p, score_fn));
    }
  }
  return out;
}

ExperimentResult simulate(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_size);
  const std::size_t n_chunks = (cfg.replicates + chunk - 1) / chunk;
  const std::size_t methods = cfg.method_count();

  std::vector<MetricsAccumulator> total(methods, MetricsAccumulator(cfg.data.n_on, lengths_from(cfg)));
  std::vector<std::size_t> violations(methods, 0);

  // Finished chunks wait here until every earlier chunk has been merged.
  std::mutex mu;
  std::map<std::size_t, ChunkResult> pending;
  std::size_t next_merge = 0;
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        ChunkResult res = run_chunk(cfg, c * chunk, std::min(cfg.replicates, (c + 1) * chunk));
        std::lock_guard<std::mutex> lock(mu);
        pending.emplace(c, std::move(res));
        for (auto it = pending.find(next_merge); it != pending.end(); it = pending.find(next_merge)) {
          for (std::size_t m = 0; m < methods; ++m) {
            total[m].merge(it->second.acc[m]);
            violations[m] += it->second.violations[m];
          }
          pending.erase(it);
          ++next_merge;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const std::size_t threads = std::min(std::max<std::size_t>(1, options.threads), n_chunks);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  for (std::size_t m = 0; m < methods; ++m) {
    MethodResult mr;
    if (m < cfg.strategies.size()) {
      mr.name = cfg.strategies[m].name();
    } else {
      mr.name = cfg.baselines[m - cfg.strategies.size()].name();
      mr.is_baseline = true;
    }
    mr.frame = total[m].frame();
    mr.invariant_violations = violations[m];
    result.methods.push_back(std::move(mr));
  }
  return result;
}

std::string method_csv(const ExperimentConfig& cfg, const MethodResult& method) {
  std::string out = "t,strategy,metric,value,stderr,n_replicates\n";
  const auto& f = method.frame;
  const std::size_t first = cfg.evaluation == Evaluation::kTerminal ? f.horizon() - 1 : 0;
  for (std::size_t t = first; t < f.horizon(); ++t) {
    const std::string& name = method.name;
    estimate_row(out, t, name, "fcr", f.fcr[t]);
    estimate_row(out, t, name, "pfcr", f.pfcr[t]);
    const double pos = static_cast<double>(f.positive_count[t]);
    estimate_row(out, t, name, "selection_probability", estimate_from_sums(pos, pos, f.replicate_count));
    estimate_row(out, t, name, "selection_rate", f.selection_rate[t]);
    estimate_row(out, t, name, "miscoverage", f.miscoverage[t]);
    row(out, t, name, "median_length", f.median_length[t], std::nullopt, f.finite_count[t]);
    estimate_row(out, t, name, "infinite_fraction", f.infinite_fraction[t]);
    estimate_row(out, t, name, "mean_calib_size", f.mean_calib_size[t]);
    if (method.is_baseline) estimate_row(out, t, name, "mean_level", f.mean_level[t]);
  }
  return out;
}

std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["label"] = cfg.label;
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.data.seed;
  j["alpha"] = cfg.alpha;
  j["n_off"] = cfg.data.n_off;
  j["n_on"] = cfg.data.n_on;
  j["evaluation"] = evaluation_name(cfg.evaluation);
  j["methods"] = nlohmann::ordered_json::array();
  for (const auto& m : result.methods) {
    nlohmann::ordered_json e;
    e["name"] = m.name;
    e["file"] = m.name + ".csv";
    if (m.is_baseline) e["invariant_violations"] = m.invariant_violations;
    j["methods"].push_back(e);
  }
  return j.dump(2) + "\n";
}

void ensure_writable(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  const fs::path probe = fs::path(dir) / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
}

void write_results(const ExperimentConfig& cfg, const ExperimentResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  auto write = [&](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
  };
  for (const auto& m : result.methods) write(fs::path(dir) / (m.name + ".csv"), method_csv(cfg, m));
  write(fs::path(dir) / "summary.json", summary_json(cfg, result));
}

std::string output_dir(const ExperimentConfig& cfg) {
  if (cfg.label.empty()) return cfg.output_path;
  return (std::filesystem::path(cfg.output_path) / cfg.label).string();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const std::string dir = output_dir(cfg);
  ensure_writable(dir);
  auto result = simulate(cfg, options);
  write_results(cfg, result, dir);
  return result;
}

}  // namespace osci
