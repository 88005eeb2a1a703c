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

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "core/rng.hpp"
#include "core/scalar_kernels.hpp"
#include "core/vvkrr.hpp"

namespace vvbo {

struct LinearObjective {
    Eigen::VectorXd mbar;  // coordinates in the posterior's eigenbasis
    double m_norm = 0.0;
};

/// Nonlinear objective F'(M f(x)) with Lipschitz constant L. `basis` maps
/// eigenbasis coordinates to measurement coordinates before F' is applied;
/// leave it empty to hand F' the eigenbasis coordinates directly.
struct LipschitzObjective {
    std::function<double(const Eigen::VectorXd&)> fn;
    double lipschitz = 0.0;
    Eigen::MatrixXd basis;
};

/// Per-iteration objective, 1-based iteration index.
using ObjectiveSchedule = std::function<LinearObjective(int)>;

using Objective = std::variant<LinearObjective, ObjectiveSchedule, LipschitzObjective>;

double ucb_score(const Posterior& state, const Point& x, const Objective& obj, int t);
/// UCB scores of every candidate row.
Eigen::VectorXd ucb_scores(const Posterior& state, const Eigen::MatrixXd& candidates,
                           const Objective& obj, int t);

struct GridStrategy {
    std::vector<int> resolution;  // per dimension, each >= 2
};

/// Derivative-free coordinate pattern search from random starts.
struct MultiStartStrategy {
    int n_starts = 32;
    int eval_budget = 200;       // evaluations per start
    double shrink = 0.5;
    double initial_step = 0.25;  // fraction of the box width
};

struct AcquisitionOptimizer {
    std::variant<GridStrategy, MultiStartStrategy> strategy;

    /// 1001 points in 1-D, 101 x 101 in 2-D, multistart above.
    static AcquisitionOptimizer default_for(int dim);
};

/// Candidate rows -> scores.
using BatchScorer = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

struct Maximizer {
    Point x;
    double value = 0.0;
};

/// Lattice points in lexicographic order (first coordinate most significant).
Eigen::MatrixXd lattice(const BoxDomain& domain, const std::vector<int>& resolution);

/// Grid: exact lattice argmax, ties go to the lexicographically smallest
/// point. MultiStart: best local search result, always inside the box.
Maximizer maximize_acquisition(const AcquisitionOptimizer& opt, const BoxDomain& domain,
                               const BatchScorer& scorer, Rng& rng);

/// One iterate of an optimization loop.
struct TraceRecord {
    int run = 0;
    int iteration = 0;  // 1-based
    int phase = 1;
    Point x;
    double f_value = 0.0;
    double simple_regret = 0.0;
    double cumulative_regret = 0.0;
    double beta = 0.0;
    double acquisition = 0.0;
    int posterior_size = 0;   // observations available when x was chosen
    double wall_ms = 0.0;
    double width = 0.0;       // beta * ||m|| * sqrt(opnorm) at x (not serialized)
};

using RegretTrace = std::vector<TraceRecord>;

/// Per-phase best-so-far simple regret and running cumulative regret.
class RegretBook {
public:
    /// Returns the record's (simple, cumulative) after observing F(x) in `phase`.
    std::pair<double, double> add(int phase, double optimum, double value);

private:
    int phase_ = -1;
    double best_ = 0.0;
    double cumulative_ = 0.0;
};

/// Black box seen by the loops. `query` returns eigenbasis coordinates of a
/// noisy measurement; `true_objective` and `optimum` are used for scoring only.
struct Problem {
    BoxDomain domain;
    std::function<Eigen::VectorXd(const Point&, Rng&)> query;
    std::function<double(const Point&, int phase)> true_objective;
    std::function<double(int phase)> optimum;
};

struct LoopOptions {
    AcquisitionOptimizer optimizer;
    int run_id = 0;
    /// Draw the first query uniformly (from the lattice for grid strategies)
    /// instead of maximizing the flat prior acquisition.
    bool random_first_query = false;
};

/// One step of a time-varying schedule.
struct ScheduleStep {
    int phase = 1;
    LinearObjective objective;
    std::optional<double> beta;  // overrides the posterior's beta for this step
};

RegretTrace run_vvbo(const Problem& problem, int T, const Objective& obj, Posterior state,
                     const LoopOptions& opts, Rng& rng, Posterior* final_state = nullptr);

RegretTrace run_tv_vvbo(const Problem& problem, int T, const std::function<ScheduleStep(int)>& schedule,
                        Posterior state, const LoopOptions& opts, Rng& rng,
                        Posterior* final_state = nullptr);

/// Uniform draw used for random first queries.
Point random_point(const AcquisitionOptimizer& opt, const BoxDomain& domain, Rng& rng);

}  // namespace vvbo
