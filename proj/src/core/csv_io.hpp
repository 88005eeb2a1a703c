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

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "core/acquisition.hpp"
#include "core/regret.hpp"

namespace vvbo {

/// Shortest-exact decimal form: 17 significant digits, '.' decimal point.
std::string format_double(double v);
double parse_double(const std::string& s);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws InputError when absent.
    [[nodiscard]] std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
/// Writes with LF line endings; fields must not contain commas or newlines.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Per-run trace with columns run, iteration, phase, x0.., f_value,
/// simple_regret, cumulative_regret, beta, acquisition, posterior_size, wall_ms.
CsvTable trace_table(const RegretTrace& trace, int input_dim);
void write_trace_csv(const std::filesystem::path& path, const RegretTrace& trace, int input_dim);
RegretTrace read_trace_csv(const std::filesystem::path& path);

struct AggregateLabels {
    std::string benchmark;
    std::string regime;
};

CsvTable aggregate_table(const std::vector<AggregateRow>& rows, const AggregateLabels& labels);
/// Long format: method, benchmark, regime, iteration, metric, mean, std with
/// metrics simple_regret and cumulative_regret.
CsvTable plotdata_table(const std::vector<AggregateRow>& rows, const AggregateLabels& labels);

/// One trajectory (grid samples) per row.
void write_trajectories_csv(const std::filesystem::path& path, const Eigen::MatrixXd& samples);
Eigen::MatrixXd read_trajectories_csv(const std::filesystem::path& path);

}  // namespace vvbo
