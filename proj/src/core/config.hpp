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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/acquisition.hpp"
#include "core/baselines.hpp"
#include "core/measurement.hpp"

namespace vvbo {

inline constexpr int kSchemaVersion = 1;

/// Per-phase adjustments applied on top of the published schedule. A phase
/// index past the published ones inherits the last published basis.
struct PhaseOverride {
    std::optional<std::vector<double>> points;  // point-evaluation basis
    std::optional<int> integral_set;            // frozen integral-functional set
    std::optional<std::vector<double>> weights;
    std::optional<double> beta;
    std::optional<int> iterations;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    BenchmarkSetup setup;
    std::vector<Method> methods{Method::VVBO};
    Regime regime = Regime::Full;
    TruncationPolicy truncation;
    BetaConfig beta;
    AcquisitionOptimizer optimizer = AcquisitionOptimizer::default_for(1);
    bool random_first_query = true;
    std::vector<PhaseOverride> phases;
    int n_runs = 10;
    std::uint64_t seed = 0;
    std::string output_dir = "results";
    int workers = 1;
};

/// Parses and validates a schema-1 document. Unset fields take the named
/// benchmark's published defaults. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fills setup.schedule from the phase overrides (no-op without overrides).
void resolve_schedule(ExperimentConfig& cfg);

/// Every resolved tunable, suitable for the run manifest.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace vvbo
