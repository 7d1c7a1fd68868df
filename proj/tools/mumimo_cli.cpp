// Copyright 2026 The mumimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mumimo: experiment runner.
//
//   mumimo run        --spec fig2.spec --out results/ [--seed N] [--samples N] [--quick] [--workers N]
//   mumimo validate   --spec fig2.spec
//   mumimo cache-info [--out results/ | --cache file]
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <cstdio>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "mumimo/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

void print_problems(const mumimo::ValidationResult& v) {
  for (const auto& e : v.errors) std::cerr << "error: " << e << "\n";
  for (const auto& e : v.infeasible) std::cerr << "infeasible: " << e << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-user MIMO TDD rate-bound experiments"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = ".";
  std::string cache_path;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  bool quick = false;
  int workers = 0;

  auto* run = app.add_subcommand("run", "Run an experiment spec and write CSV + manifest");
  run->add_option("--spec", spec_path, "Experiment spec (key = value)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the spec seed");
  run->add_option("--samples", samples, "Override Monte Carlo samples per moment")->check(CLI::Range(2, 100000000));
  run->add_flag("--quick", quick, "Quick mode (10^4 samples unless --samples is given)");
  run->add_option("--workers", workers, "Worker threads (0 = all hardware threads)")->check(CLI::NonNegativeNumber);
  run->add_option("--cache", cache_path, "Moment cache file (default <out>/moments.cache)");

  auto* validate = app.add_subcommand("validate", "Check a spec and list every violation");
  validate->add_option("--spec", spec_path, "Experiment spec")->required()->check(CLI::ExistingFile);

  auto* info = app.add_subcommand("cache-info", "Summarize a moment cache file");
  info->add_option("--out", out_dir, "Output directory holding moments.cache");
  info->add_option("--cache", cache_path, "Moment cache file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*validate) {
      const auto v = mumimo::validate_spec_file(spec_path);
      if (!v.ok()) {
        print_problems(v);
        return kExitInvalid;
      }
      const auto& s = *v.spec;
      std::cout << "ok: preset=" << mumimo::to_string(s.preset) << " samples=" << s.samples << " seed=" << s.seed
                << "\n";
      return kExitOk;
    }

    if (*run) {
      auto v = mumimo::validate_spec_file(spec_path);
      if (!v.runnable()) {
        print_problems(v);
        return kExitInvalid;
      }
      for (const auto& e : v.infeasible) std::cerr << "note: infeasible cell recorded in CSV: " << e << "\n";
      mumimo::ExperimentSpec spec = *v.spec;
      if (run->count("--seed")) spec.seed = seed;
      if (quick) {
        spec.quick = true;
        spec.samples = mumimo::kQuickSamples;
      }
      if (run->count("--samples")) spec.samples = samples;
      mumimo::RunOptions options;
      options.out_dir = out_dir;
      options.cache_file = cache_path;
      options.workers = workers;
      const auto report = mumimo::run_experiment(spec, options);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "wrote " << report.csv.string() << " (" << report.rows << " rows) and "
                << report.manifest.string() << "\n";
      return kExitOk;
    }

    if (*info) {
      const std::filesystem::path file =
          cache_path.empty() ? std::filesystem::path(out_dir) / "moments.cache" : std::filesystem::path(cache_path);
      if (!std::filesystem::exists(file)) {
        std::cerr << "error: no moment cache at " << file.string() << "\n";
        return kExitRuntime;
      }
      mumimo::MomentCache cache;
      const bool loaded = cache.load(file);
      for (const auto& w : cache.warnings()) std::cerr << "warning: " << w << "\n";
      if (!loaded) return kExitRuntime;
      std::map<std::string, std::size_t> by_kind;
      std::int64_t singular = 0;
      for (const auto& [key, est] : cache.entries()) {
        ++by_kind[mumimo::to_string(key.kind)];
        singular += est.singular_events;
      }
      std::cout << "file=" << file.string() << "\n" << "records=" << cache.size() << "\n";
      for (const auto& [kind, n] : by_kind) std::cout << "records_" << kind << "=" << n << "\n";
      std::cout << "singular_events=" << singular << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
