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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "core/acquisition.hpp"
#include "core/benchmarks.hpp"
#include "core/measurement.hpp"
#include "core/scalar_kernels.hpp"
#include "core/vvkrr.hpp"

namespace vvbo {

/// Kernel over raw input vectors (plain or augmented).
using VectorKernel = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
/// Optional batched cross covariance (rows = candidates, cols = data points).
using CrossKernel =
    std::function<Eigen::MatrixXd(const Eigen::MatrixXd&, const std::vector<Eigen::VectorXd>&)>;

/// Scalar kernel ridge regression / GP posterior with an incrementally grown
/// Cholesky factor of K_XX + lambda I.
class ScalarGP {
public:
    ScalarGP(VectorKernel kernel, double lambda, CrossKernel cross = {});

    void update(const Eigen::VectorXd& x, double y);
    void clear();

    [[nodiscard]] int size() const { return static_cast<int>(X_.size()); }
    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] const std::vector<Eigen::VectorXd>& inputs() const { return X_; }
    [[nodiscard]] const Eigen::VectorXd& targets() const { return y_; }

    struct Prediction {
        double mean = 0.0;
        double variance = 0.0;
    };
    [[nodiscard]] Prediction predict(const Eigen::VectorXd& x) const;

    struct Batch {
        Eigen::VectorXd mean;
        Eigen::VectorXd variance;
    };
    /// Rows of `candidates` are inputs.
    [[nodiscard]] Batch predict(const Eigen::MatrixXd& candidates) const;

    /// log det(I + K_XX / lambda).
    [[nodiscard]] double log_det() const;

private:
    VectorKernel kernel_;
    CrossKernel cross_;
    double lambda_;
    std::vector<Eigen::VectorXd> X_;
    Eigen::VectorXd y_;
    Eigen::MatrixXd L_;      // lower factor of K_XX + lambda I
    Eigen::VectorXd alpha_;  // (K_XX + lambda I)^{-1} y
};

/// K((x1, c1), (x2, c2)) = G(x1, x2) * c1^T B c2 on inputs laid out as [x; c].
struct AugmentedKernel {
    ScalarKernel base;
    Eigen::MatrixXd B;  // canonical output coordinates, symmetric PSD

    [[nodiscard]] int input_dim() const { return base.dim(); }
    [[nodiscard]] int context_dim() const { return static_cast<int>(B.rows()); }
    [[nodiscard]] double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    [[nodiscard]] VectorKernel as_function() const;
    [[nodiscard]] CrossKernel as_cross() const;
};

enum class Method { VVBO, BO, RBO, MTBO, RMTBO, CTBO, FFBO };
enum class Regime { Full, Partial, Scalar };

Method parse_method(std::string_view name);
std::string method_name(Method m);
Regime parse_regime(std::string_view name);
std::string regime_name(Regime r);

struct BetaConfig {
    enum class Source { Table, Fixed, Theoretical };
    Source source = Source::Table;
    double value = 1.0;  // Fixed
    double gamma = 1.0;  // Theoretical
    double sigma = 0.0;
    double zeta = 0.1;
};

/// Everything needed to instantiate a benchmark problem.
struct BenchmarkSetup {
    BenchmarkId id = BenchmarkId::GP;
    std::uint64_t benchmark_seed = kDefaultBenchmarkSeed;
    int n_grid = 50;
    double fit_reg = 0.01;
    KernelFamily input_family = KernelFamily::RBF;
    double input_nu = 2.5;
    double input_length_scale = 0.1;
    double output_length_scale = 0.1;
    double lambda = 0.01;
    double noise_std = 0.01;
    int iterations_per_phase = 50;
    /// Replaces the published schedule when set (weights, beta and lengths).
    std::optional<PhaseSchedule> schedule;
    int oracle_refine = 1;

    /// Published hyperparameters for `id`.
    static BenchmarkSetup defaults(BenchmarkId id);
};

/// A benchmark instantiated on its output grid, with noise-free objective
/// values and lattice optima for every phase. Immutable once built; safe to
/// share between concurrent runs.
class StructuredProblem {
public:
    explicit StructuredProblem(const BenchmarkSetup& setup);

    [[nodiscard]] const BenchmarkSetup& setup() const { return setup_; }
    [[nodiscard]] const TestOperator& op() const { return op_; }
    [[nodiscard]] const GridPtr& grid() const { return grid_; }
    [[nodiscard]] const PhaseSchedule& schedule() const { return schedule_; }
    [[nodiscard]] const BoxDomain& domain() const { return op_.x_domain(); }
    [[nodiscard]] const ScalarKernel& input_kernel() const { return input_kernel_; }
    [[nodiscard]] int num_phases() const { return static_cast<int>(schedule_.phases.size()); }
    [[nodiscard]] const PhaseObjective& phase(int i) const;
    /// Canonical coordinates of the phase functional m_i.
    [[nodiscard]] const Eigen::VectorXd& phase_canonical(int i) const;
    [[nodiscard]] double optimum(int i) const;
    [[nodiscard]] const Point& argmax(int i) const;

    /// Canonical coordinates of the noise-free fitted trajectory.
    [[nodiscard]] Eigen::VectorXd canonical(const Point& x) const;
    /// Same, with grid-sample noise drawn from `rng`.
    [[nodiscard]] Eigen::VectorXd noisy_canonical(const Point& x, Rng& rng) const;
    /// Noise-free F_i(x) = <m_i, f(x)>.
    [[nodiscard]] double objective(const Point& x, int phase) const;

private:
    void compute_optima();

    BenchmarkSetup setup_;
    TestOperator op_;
    GridPtr grid_;
    PhaseSchedule schedule_;
    ScalarKernel input_kernel_;
    Eigen::MatrixXd sample_map_;  // rank x n_grid
    std::vector<PhaseObjective> phases_;
    std::vector<Eigen::VectorXd> phase_canon_;
    std::vector<double> optima_;
    std::vector<Point> argmax_;
};

struct MethodOptions {
    Method method = Method::VVBO;
    Regime regime = Regime::Full;
    BetaConfig beta;
    TruncationPolicy truncation;
    AcquisitionOptimizer optimizer;
    int run_id = 0;
    /// Random first query at the start of the run and after every reset.
    bool random_first_query = true;
};

/// Phases visited under a regime: the partial regime keeps the prefix that
/// shares the first basis, the scalar regime only the first phase.
int active_phases(const StructuredProblem& problem, Regime regime);
int horizon(const StructuredProblem& problem, Regime regime);

/// One seeded run of a method. Simple and cumulative regret are computed
/// against the problem's per-phase optima.
RegretTrace run_method(const StructuredProblem& problem, const MethodOptions& opts, Rng& rng);

/// Recomputes simple (per-phase best-so-far) and cumulative regret from the
/// f_value and phase columns.
void apply_regret(RegretTrace& trace, const std::vector<double>& optima);

}  // namespace vvbo
