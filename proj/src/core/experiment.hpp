// Copyright 2026 The vvbo Authors.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/baselines.hpp"
#include "core/config.hpp"

namespace vvbo {

struct ExperimentSummary {
    std::filesystem::path output_dir;
    int runs_ok = 0;
    int runs_failed = 0;
    std::vector<std::string> failures;  // "method run k: message"
};

/// Seed of run `run`; identical across methods so every method sees the same
/// first query and noise stream.
std::uint64_t run_seed(std::uint64_t master, int run);

/// Executes every (method, run) pair, writes runs/<method>_runNNN.csv,
/// manifest.json, aggregate.csv and plotdata.csv. A failing run leaves a
/// runs/<method>_runNNN.FAILED marker and is excluded from the aggregate.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Rebuilds aggregate.csv and plotdata.csv from the per-run CSVs and the
/// manifest in `dir`.
void aggregate_directory(const std::filesystem::path& dir);

std::string run_file_stem(Method m, int run);

struct OracleReport {
    Point x;
    double value = 0.0;
};

/// Lattice optimum of a published phase objective.
OracleReport compute_oracle(BenchmarkId id, int phase, std::uint64_t benchmark_seed = kDefaultBenchmarkSeed);

}  // namespace vvbo
