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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "core/hilbert_rep.hpp"
#include "core/rng.hpp"
#include "core/scalar_kernels.hpp"

namespace vvbo {

enum class BenchmarkId { GP, GP3D, Ackley, Eggholder, Bukin, HolderTable, Shubert, Langermann };

BenchmarkId parse_benchmark(std::string_view name);
std::string benchmark_name(BenchmarkId id);
std::vector<BenchmarkId> all_benchmarks();

inline constexpr std::uint64_t kDefaultBenchmarkSeed = 20260516;

/// Per-benchmark hyperparameters and trajectory-index interval.
struct BenchmarkDefaults {
    double input_length_scale;
    double output_length_scale;
    double lambda;
    double noise_std;
    double t_lo;
    double t_hi;
};
BenchmarkDefaults benchmark_defaults(BenchmarkId id);

/// Ground-truth operator h(x, t); f(x) is the trajectory t -> h(x, t).
class TestOperator {
public:
    static TestOperator make(BenchmarkId id, std::uint64_t seed = kDefaultBenchmarkSeed);

    [[nodiscard]] BenchmarkId id() const { return id_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] const BoxDomain& x_domain() const { return x_domain_; }
    [[nodiscard]] double t_lo() const { return t_lo_; }
    [[nodiscard]] double t_hi() const { return t_hi_; }
    /// GP / GP3D expansion coefficients (N_x x 10); empty for closed-form operators.
    [[nodiscard]] const Eigen::MatrixXd& gp_coefficients() const { return alpha_; }

    /// h(x, t) without domain checks.
    [[nodiscard]] double value(const Point& x, double t) const;
    /// Samples h(x, t_j) for all j; uses precomputed kernel products for GP operators.
    [[nodiscard]] Eigen::VectorXd trajectory(const Point& x, const Eigen::VectorXd& ts) const;

private:
    TestOperator(BenchmarkId id, std::uint64_t seed, BoxDomain domain, double t_lo, double t_hi);

    BenchmarkId id_;
    std::uint64_t seed_;
    BoxDomain x_domain_;
    double t_lo_;
    double t_hi_;
    // GP expansion h(x, t) = G(x, X) alpha G(T, t).
    PointList anchors_x_;
    Eigen::VectorXd anchors_t_;
    Eigen::MatrixXd alpha_;
};

/// Checked evaluation of h(x, t).
double eval_ground_truth(const TestOperator& op, const Point& x, double t);

/// Trajectory index values used by point evaluations in the benchmark's schedule.
std::vector<double> schedule_eval_points(BenchmarkId id);

/// Output grid for a benchmark: n_grid equispaced points on its t interval
/// with the schedule's evaluation points pinned onto the grid.
GridPtr make_benchmark_grid(BenchmarkId id, int n_grid = 50, double fit_reg = 0.01,
                            std::optional<double> output_length_scale = std::nullopt);

struct FunctionalDescriptor {
    enum class Kind { PointEval, Integral };
    Kind kind = Kind::PointEval;
    double t = 0.0;              // point evaluations
    int set = 0;                 // integral functionals: frozen draw set
    int index = 0;               // integral functionals: member of the set
    Eigen::VectorXd weight_curve;  // integral functionals: weights at the grid points

    [[nodiscard]] bool same_as(const FunctionalDescriptor& o) const;
};

struct PhaseDef {
    std::vector<FunctionalDescriptor> basis;
    Eigen::VectorXd weights;
    double beta = 1.0;
    int iterations = 50;
};

struct PhaseSchedule {
    std::vector<PhaseDef> phases;

    [[nodiscard]] int total_iterations() const;
    /// 1-based phase of a 1-based iteration.
    [[nodiscard]] int phase_of(int iteration) const;
    /// Phase one -> two keeps the basis; two -> three replaces it.
    void validate_table_rules() const;
};

bool same_basis(const PhaseDef& a, const PhaseDef& b);

/// Uniform [0, 1] weight curve on the grid, frozen by (seed, set, index).
Eigen::VectorXd integral_weight_curve(std::uint64_t seed, int set, int index, int n_grid);

/// Three-phase schedule with the published bases, weights and beta values.
PhaseSchedule table_schedule(BenchmarkId id, const OutputGrid& grid, std::uint64_t seed,
                             int iterations_per_phase = 50);

struct PhaseObjective {
    std::vector<Functional> basis;
    Eigen::VectorXd weights;
    Functional m;
    double m_norm = 0.0;
    double beta = 1.0;
};

Functional build_functional(const FunctionalDescriptor& d, const GridPtr& grid);
PhaseObjective phase_objective(const PhaseSchedule& schedule, int phase, const GridPtr& grid);

/// Noisy trajectory: grid samples plus i.i.d. N(0, std^2), then fitted.
HilbertVector query_trajectory(const TestOperator& op, const Point& x, double noise_std,
                               const GridPtr& grid, Rng& rng);

/// Linear map from raw grid samples to canonical coordinates of the fitted
/// trajectory (rank x n_grid).
Eigen::MatrixXd sample_to_canonical(const OutputGrid& grid);

/// Noise-free F(x) = <m, f_hat(x)> for every candidate row.
Eigen::VectorXd objective_values(const TestOperator& op, const GridPtr& grid, const Functional& m,
                                 const Eigen::MatrixXd& candidates);

struct OracleResult {
    Point x;
    double value = 0.0;
};

/// Points per dimension of the oracle lattice: 10001, 501, 51 for d = 1, 2, 3.
int oracle_resolution(int dim);

/// Exhaustive lattice maximization of the noise-free objective; `refine`
/// multiplies the number of lattice intervals.
OracleResult oracle_optimum(const TestOperator& op, const Functional& m, const GridPtr& grid, int refine = 1);

}  // namespace vvbo
