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

#include <string>
#include <vector>

#include "core/acquisition.hpp"

namespace vvbo {

struct RegretColumns {
    std::vector<double> simple;
    std::vector<double> cumulative;
};

/// Simple regret is the per-phase best-so-far gap; cumulative regret sums the
/// instantaneous gaps F*_phase - F(x_t). Phases are 1-based.
RegretColumns compute_regret(const std::vector<double>& f_values, const std::vector<int>& phases,
                             const std::vector<double>& optima);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single value
};
MeanStd mean_std(const std::vector<double>& values);

/// Across-run statistics at one iteration.
struct AggregateRow {
    std::string method;
    int iteration = 0;
    int phase = 0;
    int n_runs = 0;
    MeanStd f_value;
    MeanStd simple_regret;
    MeanStd cumulative_regret;
};

/// Aggregates runs of one method iteration by iteration. Runs may differ in
/// length; each iteration uses the runs that reached it.
std::vector<AggregateRow> aggregate_runs(const std::string& method, const std::vector<RegretTrace>& runs);

}  // namespace vvbo
