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

#include "core/acquisition.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace vvbo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::VectorXd lipschitz_scores(const Posterior& state, const Eigen::MatrixXd& candidates,
                                 const LipschitzObjective& obj) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(state.rank());
    const auto batch = state.evaluate(candidates, zero, /*with_mean_coords=*/true);
    const double beta = state.beta();
    Eigen::VectorXd out(candidates.rows());
    for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
        Eigen::VectorXd coords = batch.mean_coords.row(i).transpose();
        if (obj.basis.size() > 0) coords = obj.basis * coords;
        out(i) = obj.fn(coords) + beta * obj.lipschitz * std::sqrt(batch.opnorm(i));
    }
    return out;
}

Eigen::VectorXd linear_scores(const Posterior& state, const Eigen::MatrixXd& candidates,
                              const LinearObjective& obj, double beta) {
    const auto batch = state.evaluate(candidates, obj.mbar);
    return batch.objective_mean + beta * obj.m_norm * batch.opnorm.cwiseSqrt();
}

}  // namespace

Eigen::VectorXd ucb_scores(const Posterior& state, const Eigen::MatrixXd& candidates,
                           const Objective& obj, int t) {
    return std::visit(overloaded{
                          [&](const LinearObjective& o) { return linear_scores(state, candidates, o, state.beta()); },
                          [&](const ObjectiveSchedule& s) {
                              return linear_scores(state, candidates, s(t), state.beta());
                          },
                          [&](const LipschitzObjective& o) { return lipschitz_scores(state, candidates, o); },
                      },
                      obj);
}

double ucb_score(const Posterior& state, const Point& x, const Objective& obj, int t) {
    Eigen::MatrixXd row = x.transpose();
    return ucb_scores(state, row, obj, t)(0);
}

AcquisitionOptimizer AcquisitionOptimizer::default_for(int dim) {
    if (dim == 1) return {GridStrategy{{1001}}};
    if (dim == 2) return {GridStrategy{{101, 101}}};
    return {MultiStartStrategy{}};
}

Eigen::MatrixXd lattice(const BoxDomain& domain, const std::vector<int>& resolution) {
    const int d = domain.dim();
    if (static_cast<int>(resolution.size()) != d) throw InputError("grid resolution must have one entry per dimension");
    Eigen::Index total = 1;
    for (int r : resolution) {
        if (r < 2) throw InputError("grid resolution must be >= 2 per dimension");
        total *= r;
    }
    Eigen::MatrixXd pts(total, d);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (Eigen::Index row = 0; row < total; ++row) {
        for (int k = 0; k < d; ++k) {
            const double lo = domain.lower(k), hi = domain.upper(k);
            const int r = resolution[static_cast<std::size_t>(k)];
            const int i = idx[static_cast<std::size_t>(k)];
            pts(row, k) = i == r - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (r - 1);
        }
        for (int k = d - 1; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < resolution[static_cast<std::size_t>(k)]) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    return pts;
}

namespace {

Maximizer grid_argmax(const Eigen::MatrixXd& pts, const Eigen::VectorXd& scores) {
    Eigen::Index best = -1;
    double best_val = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        if (scores(i) > best_val) {
            best_val = scores(i);
            best = i;
        }
    }
    if (best < 0) best = 0;  // every score NaN or -inf
    return {pts.row(best).transpose(), scores(best)};
}

Maximizer pattern_search(const MultiStartStrategy& ms, const BoxDomain& domain, const BatchScorer& scorer,
                         Point x, int budget) {
    const int d = domain.dim();
    const Eigen::VectorXd width = domain.upper - domain.lower;
    Eigen::MatrixXd one = x.transpose();
    double fx = scorer(one)(0);
    int evals = 1;
    double step = ms.initial_step;
    while (evals + 2 * d <= budget && step > 1e-9) {
        Eigen::MatrixXd trial(2 * d, d);
        for (int k = 0; k < d; ++k) {
            Point up = x, down = x;
            up(k) += step * width(k);
            down(k) -= step * width(k);
            trial.row(2 * k) = domain.clip(up).transpose();
            trial.row(2 * k + 1) = domain.clip(down).transpose();
        }
        const Eigen::VectorXd s = scorer(trial);
        evals += 2 * d;
        Eigen::Index arg = 0;
        const double top = s.maxCoeff(&arg);
        if (top > fx) {
            fx = top;
            x = trial.row(arg).transpose();
        } else {
            step *= ms.shrink;
        }
    }
    return {x, fx};
}

}  // namespace

Point random_point(const AcquisitionOptimizer& opt, const BoxDomain& domain, Rng& rng) {
    if (const auto* grid = std::get_if<GridStrategy>(&opt.strategy)) {
        Point x(domain.dim());
        for (int k = 0; k < domain.dim(); ++k) {
            const int r = grid->resolution.at(static_cast<std::size_t>(k));
            std::uniform_int_distribution<int> pick(0, r - 1);
            const int i = pick(rng);
            const double lo = domain.lower(k), hi = domain.upper(k);
            x(k) = i == r - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (r - 1);
        }
        return x;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Point x(domain.dim());
    for (int k = 0; k < domain.dim(); ++k) x(k) = domain.lower(k) + u(rng) * (domain.upper(k) - domain.lower(k));
    return x;
}

Maximizer maximize_acquisition(const AcquisitionOptimizer& opt, const BoxDomain& domain,
                               const BatchScorer& scorer, Rng& rng) {
    if (domain.dim() == 0) throw InputError("maximize_acquisition: empty domain");
    if (const auto* grid = std::get_if<GridStrategy>(&opt.strategy)) {
        const Eigen::MatrixXd pts = lattice(domain, grid->resolution);
        return grid_argmax(pts, scorer(pts));
    }
    const auto& ms = std::get<MultiStartStrategy>(opt.strategy);
    if (ms.n_starts < 1) throw InputError("multistart needs n_starts >= 1");
    if (!(ms.shrink > 0.0 && ms.shrink < 1.0)) throw InputError("multistart shrink factor must be in (0, 1)");
    Maximizer best{domain.lower, -std::numeric_limits<double>::infinity()};
    for (int s = 0; s < ms.n_starts; ++s) {
        Point start = random_point(opt, domain, rng);
        Maximizer local = pattern_search(ms, domain, scorer, std::move(start), ms.eval_budget);
        if (local.value > best.value) best = std::move(local);
    }
    return best;
}

std::pair<double, double> RegretBook::add(int phase, double optimum, double value) {
    if (phase != phase_) {
        phase_ = phase;
        best_ = value;
    } else {
        best_ = std::max(best_, value);
    }
    cumulative_ += optimum - value;
    return {optimum - best_, cumulative_};
}

namespace {

RegretTrace run_loop(const Problem& problem, int T, const std::function<ScheduleStep(int)>* schedule,
                     const Objective* fixed, Posterior state, const LoopOptions& opts, Rng& rng,
                     Posterior* final_state) {
    RegretTrace trace;
    trace.reserve(static_cast<std::size_t>(std::max(T, 0)));
    RegretBook book;
    const std::optional<double> base_override = state.hyper().beta_override;
    for (int t = 1; t <= T; ++t) {
        const auto start = std::chrono::steady_clock::now();
        int phase = 1;
        Objective obj;
        if (schedule) {
            ScheduleStep step = (*schedule)(t);
            phase = step.phase;
            state.set_beta_override(step.beta ? step.beta : base_override);
            obj = std::move(step.objective);
        } else {
            obj = *fixed;
        }
        const BatchScorer scorer = [&](const Eigen::MatrixXd& c) { return ucb_scores(state, c, obj, t); };

        Maximizer choice;
        if (t == 1 && opts.random_first_query) {
            choice.x = random_point(opts.optimizer, problem.domain, rng);
            choice.value = scorer(Eigen::MatrixXd(choice.x.transpose()))(0);
        } else {
            choice = maximize_acquisition(opts.optimizer, problem.domain, scorer, rng);
        }

        TraceRecord rec;
        rec.run = opts.run_id;
        rec.iteration = t;
        rec.phase = phase;
        rec.x = choice.x;
        rec.acquisition = choice.value;
        rec.beta = state.beta();
        rec.posterior_size = state.size();
        double m_norm = 0.0;
        if (const auto* lin = std::get_if<LinearObjective>(&obj)) m_norm = lin->m_norm;
        if (const auto* sch = std::get_if<ObjectiveSchedule>(&obj)) m_norm = (*sch)(t).m_norm;
        if (const auto* lip = std::get_if<LipschitzObjective>(&obj)) m_norm = lip->lipschitz;
        rec.width = rec.beta * m_norm * std::sqrt(state.variance_opnorm(choice.x));

        const Eigen::VectorXd y = problem.query(choice.x, rng);
        state.update(choice.x, y);

        rec.f_value = problem.true_objective(choice.x, phase);
        std::tie(rec.simple_regret, rec.cumulative_regret) = book.add(phase, problem.optimum(phase), rec.f_value);
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        trace.push_back(std::move(rec));
    }
    if (final_state) *final_state = std::move(state);
    return trace;
}

}  // namespace

RegretTrace run_vvbo(const Problem& problem, int T, const Objective& obj, Posterior state,
                     const LoopOptions& opts, Rng& rng, Posterior* final_state) {
    return run_loop(problem, T, nullptr, &obj, std::move(state), opts, rng, final_state);
}

RegretTrace run_tv_vvbo(const Problem& problem, int T, const std::function<ScheduleStep(int)>& schedule,
                        Posterior state, const LoopOptions& opts, Rng& rng, Posterior* final_state) {
    return run_loop(problem, T, &schedule, nullptr, std::move(state), opts, rng, final_state);
}

}  // namespace vvbo
