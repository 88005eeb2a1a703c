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

#include "core/regret.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace vvbo {

RegretColumns compute_regret(const std::vector<double>& f_values, const std::vector<int>& phases,
                             const std::vector<double>& optima) {
    if (f_values.size() != phases.size()) throw InputError("compute_regret: column lengths differ");
    RegretColumns out;
    out.simple.reserve(f_values.size());
    out.cumulative.reserve(f_values.size());
    double cumulative = 0.0;
    double best = 0.0;
    int current = -1;
    for (std::size_t i = 0; i < f_values.size(); ++i) {
        const int p = phases[i];
        if (p < 1 || p > static_cast<int>(optima.size()))
            throw ConfigError("compute_regret: no oracle value for phase " + std::to_string(p));
        const double opt = optima[static_cast<std::size_t>(p - 1)];
        if (p != current) {
            current = p;
            best = f_values[i];
        } else {
            best = std::max(best, f_values[i]);
        }
        cumulative += opt - f_values[i];
        out.simple.push_back(opt - best);
        out.cumulative.push_back(cumulative);
    }
    return out;
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) return out;
    double s = 0.0;
    for (double v : values) s += v;
    out.mean = s / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

std::vector<AggregateRow> aggregate_runs(const std::string& method, const std::vector<RegretTrace>& runs) {
    std::size_t longest = 0;
    for (const auto& r : runs) longest = std::max(longest, r.size());
    std::vector<AggregateRow> rows;
    rows.reserve(longest);
    for (std::size_t i = 0; i < longest; ++i) {
        std::vector<double> f, s, c;
        AggregateRow row;
        row.method = method;
        for (const auto& r : runs) {
            if (i >= r.size()) continue;
            const TraceRecord& rec = r[i];
            if (row.n_runs == 0) {
                row.iteration = rec.iteration;
                row.phase = rec.phase;
            } else if (rec.iteration != row.iteration || rec.phase != row.phase) {
                throw InputError("aggregate_runs: runs disagree on iteration/phase labels at row " + std::to_string(i));
            }
            ++row.n_runs;
            f.push_back(rec.f_value);
            s.push_back(rec.simple_regret);
            c.push_back(rec.cumulative_regret);
        }
        row.f_value = mean_std(f);
        row.simple_regret = mean_std(s);
        row.cumulative_regret = mean_std(c);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace vvbo
