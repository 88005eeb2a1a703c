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

#include "core/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/acquisition.hpp"
#include "core/error.hpp"

namespace vvbo {

namespace {

constexpr double kPi = std::numbers::pi;

double ackley(double u1, double u2) {
    const double d = 2.0;
    const double sq = std::sqrt((u1 * u1 + u2 * u2) / d);
    const double cs = (std::cos(0.2 * kPi * u1) + std::cos(0.2 * kPi * u2)) / d;
    return -(-20.0 * std::exp(-0.2 * sq) - std::exp(cs) + 20.0 + std::numbers::e - 20.0);
}

double eggholder(double u1, double u2) {
    const double a = u2 / 2.0 + 47.0;
    return -a * std::sin(std::sqrt(0.5 * std::abs(a + u1 / 4.0))) -
           u1 / 2.0 * std::sin(std::sqrt(0.5 * std::abs(u1 / 2.0 - a)));
}

double bukin(double u1, double u2) {
    return -100.0 * std::sqrt(std::abs(u2 - 0.01 * u1 * u1)) + 0.01 * std::abs(u1 + 10.0) + 180.0;
}

double holder_table(double u1, double u2) {
    return std::abs(std::sin(u1) * std::cos(u2) *
                    std::exp(std::abs(1.0 - std::sqrt(u1 * u1 + u2 * u2) / kPi)));
}

double shubert(double u1, double u2) {
    double s1 = 0.0, s2 = 0.0;
    for (int i = 1; i <= 5; ++i) {
        s1 += i * std::cos((i + 1) * u1 / 2.0 + i);
        s2 += i * std::cos((i + 1) * u2 / 2.0 + i);
    }
    return s1 * s2 / 100.0;
}

double langermann(double u1, double u2) {
    static constexpr double c[5] = {1, 2, 5, 2, 3};
    static constexpr double A[5][2] = {{3, 5}, {5, 2}, {2, 1}, {1, 4}, {7, 9}};
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double d1 = u1 / 2.0 - A[i][0];
        const double d2 = u2 / 2.0 - A[i][1];
        const double r2 = d1 * d1 + d2 * d2;
        s += c[i] * std::exp(-r2 / kPi) * std::cos(kPi * r2);
    }
    return s;
}

constexpr double kGpLengthScale = 0.1;

}  // namespace

BenchmarkId parse_benchmark(std::string_view name) {
    if (name == "gp" || name == "GP") return BenchmarkId::GP;
    if (name == "gp3d" || name == "GP3D" || name == "gp_3d") return BenchmarkId::GP3D;
    if (name == "ackley") return BenchmarkId::Ackley;
    if (name == "eggholder") return BenchmarkId::Eggholder;
    if (name == "bukin") return BenchmarkId::Bukin;
    if (name == "holder_table" || name == "holdertable" || name == "holder") return BenchmarkId::HolderTable;
    if (name == "shubert") return BenchmarkId::Shubert;
    if (name == "langermann") return BenchmarkId::Langermann;
    throw InputError("unknown benchmark '" + std::string(name) + "'");
}

std::string benchmark_name(BenchmarkId id) {
    switch (id) {
        case BenchmarkId::GP: return "gp";
        case BenchmarkId::GP3D: return "gp3d";
        case BenchmarkId::Ackley: return "ackley";
        case BenchmarkId::Eggholder: return "eggholder";
        case BenchmarkId::Bukin: return "bukin";
        case BenchmarkId::HolderTable: return "holder_table";
        case BenchmarkId::Shubert: return "shubert";
        case BenchmarkId::Langermann: return "langermann";
    }
    return "unknown";
}

std::vector<BenchmarkId> all_benchmarks() {
    return {BenchmarkId::GP,        BenchmarkId::GP3D,        BenchmarkId::Ackley,  BenchmarkId::Eggholder,
            BenchmarkId::Bukin,     BenchmarkId::HolderTable, BenchmarkId::Shubert, BenchmarkId::Langermann};
}

BenchmarkDefaults benchmark_defaults(BenchmarkId id) {
    switch (id) {
        case BenchmarkId::GP: return {0.1, 0.1, 1e-2, 1e-2, 0.0, 1.0};
        case BenchmarkId::GP3D: return {0.1, 0.1, 1e-2, 1e-2, 0.0, 1.0};
        case BenchmarkId::Ackley: return {3.0, 3.0, 1e-2, 1e-2, -32.768, 32.768};
        case BenchmarkId::Eggholder: return {50.0, 50.0, 1e-2, 1.0, -512.0, 512.0};
        case BenchmarkId::Bukin: return {0.6, 1.0, 1e-2, 1.0, -3.0, 3.0};
        case BenchmarkId::HolderTable: return {1.0, 1.0, 1e-2, 1.0, -10.0, 10.0};
        case BenchmarkId::Shubert: return {0.5, 0.5, 1e-2, 1e-3, -10.0, 10.0};
        case BenchmarkId::Langermann: return {0.5, 0.5, 1e-2, 1e-3, 0.0, 10.0};
    }
    throw InputError("unknown benchmark");
}

TestOperator::TestOperator(BenchmarkId id, std::uint64_t seed, BoxDomain domain, double t_lo, double t_hi)
    : id_(id), seed_(seed), x_domain_(std::move(domain)), t_lo_(t_lo), t_hi_(t_hi) {}

TestOperator TestOperator::make(BenchmarkId id, std::uint64_t seed) {
    const auto d = benchmark_defaults(id);
    switch (id) {
        case BenchmarkId::GP:
        case BenchmarkId::GP3D: {
            const int dim = id == BenchmarkId::GP ? 1 : 3;
            TestOperator op(id, seed, BoxDomain::cube(0.0, 1.0, dim), d.t_lo, d.t_hi);
            if (dim == 1) {
                const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(10, 0.0, 1.0);
                for (Eigen::Index i = 0; i < xs.size(); ++i) op.anchors_x_.push_back(xs.segment(i, 1));
            } else {
                const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(5, 0.0, 1.0);
                for (Eigen::Index a = 0; a < 5; ++a)
                    for (Eigen::Index b = 0; b < 5; ++b)
                        for (Eigen::Index c = 0; c < 5; ++c) op.anchors_x_.push_back(Eigen::Vector3d(xs(a), xs(b), xs(c)));
            }
            op.anchors_t_ = Eigen::VectorXd::LinSpaced(10, 0.0, 1.0);
            Rng rng = make_rng(seed, 0, id == BenchmarkId::GP ? "gp_alpha" : "gp3d_alpha");
            std::uniform_real_distribution<double> u(-3.5, 3.5);
            op.alpha_.resize(static_cast<Eigen::Index>(op.anchors_x_.size()), op.anchors_t_.size());
            // Column-major fill order is part of the frozen-seed contract.
            for (Eigen::Index j = 0; j < op.alpha_.cols(); ++j)
                for (Eigen::Index i = 0; i < op.alpha_.rows(); ++i) op.alpha_(i, j) = u(rng);
            return op;
        }
        default:
            break;
    }
    double xlo = d.t_lo, xhi = d.t_hi;
    if (id == BenchmarkId::Bukin) {
        xlo = -15.0;
        xhi = -5.0;
    }
    return TestOperator(id, seed, BoxDomain::interval(xlo, xhi), d.t_lo, d.t_hi);
}

double TestOperator::value(const Point& x, double t) const {
    switch (id_) {
        case BenchmarkId::GP:
        case BenchmarkId::GP3D: {
            const ScalarKernel kx = ScalarKernel::isotropic(KernelFamily::RBF, kGpLengthScale, x_domain_.dim());
            const ScalarKernel kt = ScalarKernel::isotropic(KernelFamily::RBF, kGpLengthScale, 1);
            const Eigen::VectorXd gx = cross_gram(kx, x, anchors_x_);
            Eigen::VectorXd gt(anchors_t_.size());
            const Eigen::VectorXd tv = Eigen::VectorXd::Constant(1, t);
            for (Eigen::Index j = 0; j < gt.size(); ++j) gt(j) = kt(anchors_t_.segment(j, 1), tv);
            return gx.dot(alpha_ * gt);
        }
        case BenchmarkId::Ackley: return ackley(x(0), t);
        case BenchmarkId::Eggholder: return eggholder(x(0), t);
        case BenchmarkId::Bukin: return bukin(x(0), t);
        case BenchmarkId::HolderTable: return holder_table(x(0), t);
        case BenchmarkId::Shubert: return shubert(x(0), t);
        case BenchmarkId::Langermann: return langermann(x(0), t);
    }
    throw InternalError("unhandled benchmark");
}

Eigen::VectorXd TestOperator::trajectory(const Point& x, const Eigen::VectorXd& ts) const {
    Eigen::VectorXd out(ts.size());
    if (id_ == BenchmarkId::GP || id_ == BenchmarkId::GP3D) {
        const ScalarKernel kx = ScalarKernel::isotropic(KernelFamily::RBF, kGpLengthScale, x_domain_.dim());
        const Eigen::VectorXd gx = cross_gram(kx, x, anchors_x_);
        const Eigen::RowVectorXd left = gx.transpose() * alpha_;
        for (Eigen::Index k = 0; k < ts.size(); ++k) {
            double s = 0.0;
            for (Eigen::Index j = 0; j < anchors_t_.size(); ++j) {
                const double d = (anchors_t_(j) - ts(k)) / kGpLengthScale;
                s += left(j) * std::exp(-0.5 * d * d);
            }
            out(k) = s;
        }
        return out;
    }
    for (Eigen::Index k = 0; k < ts.size(); ++k) out(k) = value(x, ts(k));
    return out;
}

double eval_ground_truth(const TestOperator& op, const Point& x, double t) {
    if (x.size() != op.x_domain().dim()) throw InputError("eval_ground_truth: input dimension mismatch");
    if (!op.x_domain().contains(x, 1e-12) || t < op.t_lo() - 1e-12 || t > op.t_hi() + 1e-12) {
        throw InputError("eval_ground_truth: (x, t) outside the operator's domain");
    }
    return op.value(x, t);
}

std::vector<double> schedule_eval_points(BenchmarkId id) {
    switch (id) {
        case BenchmarkId::GP:
        case BenchmarkId::GP3D: return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        case BenchmarkId::Bukin: return {0.0, 0.5, 1.0, 1.5, 2.0, -0.5, -1.0, -1.5, -2.0};
        case BenchmarkId::Eggholder: return {500, 400, 300, 200, 100, 0, -100, -200, -300, -400};
        case BenchmarkId::Shubert: return {0, 1, 2, 3, 4, -1, -2, -3, -4};
        case BenchmarkId::Langermann: return {5, 6, 7, 8, 9, 0, 1, 2, 3, 4};
        case BenchmarkId::Ackley:
        case BenchmarkId::HolderTable: return {};
    }
    return {};
}

GridPtr make_benchmark_grid(BenchmarkId id, int n_grid, double fit_reg, std::optional<double> output_length_scale) {
    const auto d = benchmark_defaults(id);
    const double ell = output_length_scale.value_or(d.output_length_scale);
    return std::make_shared<const OutputGrid>(OutputGrid::grid_points(d.t_lo, d.t_hi, n_grid, schedule_eval_points(id)),
                                              ScalarKernel::isotropic(KernelFamily::RBF, ell, 1), fit_reg);
}

bool FunctionalDescriptor::same_as(const FunctionalDescriptor& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::PointEval) return t == o.t;
    return set == o.set && index == o.index && weight_curve.size() == o.weight_curve.size() &&
           weight_curve == o.weight_curve;
}

bool same_basis(const PhaseDef& a, const PhaseDef& b) {
    if (a.basis.size() != b.basis.size()) return false;
    for (std::size_t i = 0; i < a.basis.size(); ++i)
        if (!a.basis[i].same_as(b.basis[i])) return false;
    return true;
}

int PhaseSchedule::total_iterations() const {
    int total = 0;
    for (const auto& p : phases) total += p.iterations;
    return total;
}

int PhaseSchedule::phase_of(int iteration) const {
    int acc = 0;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        acc += phases[i].iterations;
        if (iteration <= acc) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(phases.size());
}

void PhaseSchedule::validate_table_rules() const {
    if (phases.size() >= 2 && !same_basis(phases[0], phases[1])) {
        throw ConfigError("schedule: phase one and two must share the functional basis");
    }
    if (phases.size() >= 3 && same_basis(phases[1], phases[2])) {
        throw ConfigError("schedule: phase three must replace the functional basis");
    }
}

Eigen::VectorXd integral_weight_curve(std::uint64_t seed, int set, int index, int n_grid) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(set * 1000 + index), "integral_functional");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd g(n_grid);
    for (int j = 0; j < n_grid; ++j) g(j) = u(rng);
    return g;
}

PhaseSchedule table_schedule(BenchmarkId id, const OutputGrid& grid, std::uint64_t seed, int iterations_per_phase) {
    auto points = [](std::initializer_list<double> ts) {
        std::vector<FunctionalDescriptor> out;
        for (double t : ts) out.push_back({FunctionalDescriptor::Kind::PointEval, t, 0, 0, {}});
        return out;
    };
    auto integrals = [&](int set) {
        std::vector<FunctionalDescriptor> out;
        for (int i = 1; i <= 5; ++i) {
            out.push_back({FunctionalDescriptor::Kind::Integral, 0.0, set, i,
                           integral_weight_curve(seed, set, i, grid.size())});
        }
        return out;
    };
    auto vec = [](std::initializer_list<double> v) {
        Eigen::VectorXd w(static_cast<Eigen::Index>(v.size()));
        Eigen::Index i = 0;
        for (double x : v) w(i++) = x;
        return w;
    };
    const Eigen::VectorXd avg5 = Eigen::VectorXd::Constant(5, 0.2);
    const int n = iterations_per_phase;

    PhaseSchedule s;
    switch (id) {
        case BenchmarkId::GP:
        case BenchmarkId::GP3D: {
            auto b1 = points({0.0, 0.1, 0.2, 0.3, 0.4});
            s.phases = {{b1, avg5, 6, n}, {b1, vec({0, 1, 0, 0, 0}), 6, n},
                        {points({0.5, 0.6, 0.7, 0.8, 0.9}), avg5, 6, n}};
            break;
        }
        case BenchmarkId::Ackley: {
            auto b1 = integrals(1);
            s.phases = {{b1, avg5, 10, n}, {b1, 0.25 * vec({1, 0, 1, 1, 1}), 40, n}, {integrals(2), avg5, 70, n}};
            break;
        }
        case BenchmarkId::Bukin: {
            auto b1 = points({0.0, 0.5, 1.0, 1.5, 2.0});
            s.phases = {{b1, avg5, 100, n}, {b1, vec({0, 0, 0, 0, 1}), 115, n},
                        {points({0.0, -0.5, -1.0, -1.5, -2.0}), avg5, 80, n}};
            break;
        }
        case BenchmarkId::Eggholder: {
            auto b1 = points({500, 400, 300, 200, 100});
            s.phases = {{b1, vec({1, 0, 0, 0, 0}), 400, n}, {b1, vec({0, 0, 1, 0, 0}), 250, n},
                        {points({0, -100, -200, -300, -400}), vec({0, 0, 0, 0, 1}), 300, n}};
            break;
        }
        case BenchmarkId::HolderTable: {
            auto b1 = integrals(1);
            s.phases = {{b1, avg5, 30, n}, {b1, vec({1, 0, 0, 0, 0}), 30, n}, {integrals(2), avg5, 5, n}};
            break;
        }
        case BenchmarkId::Shubert: {
            auto b1 = points({0, 1, 2, 3, 4});
            s.phases = {{b1, avg5, 0.5, n}, {b1, vec({0, 0, 0, 1, 0}), 0.5, n},
                        {points({0, -1, -2, -3, -4}), vec({0, 0, 0, 0, 1}), 1, n}};
            break;
        }
        case BenchmarkId::Langermann: {
            auto b1 = points({5, 6, 7, 8, 9});
            s.phases = {{b1, avg5, 3, n}, {b1, vec({1, 0, 0, 0, 0}), 3, n},
                        {points({0, 1, 2, 3, 4}), vec({1, 0, 0, 0, 0}), 3, n}};
            break;
        }
    }
    s.validate_table_rules();
    return s;
}

Functional build_functional(const FunctionalDescriptor& d, const GridPtr& grid) {
    if (d.kind == FunctionalDescriptor::Kind::PointEval) return point_eval_functional(grid, d.t);
    return integral_functional(grid, d.weight_curve);
}

PhaseObjective phase_objective(const PhaseSchedule& schedule, int phase, const GridPtr& grid) {
    if (phase < 1 || phase > static_cast<int>(schedule.phases.size())) {
        throw InputError("phase " + std::to_string(phase) + " is not part of the schedule");
    }
    const auto& def = schedule.phases[static_cast<std::size_t>(phase - 1)];
    PhaseObjective out;
    for (const auto& d : def.basis) out.basis.push_back(build_functional(d, grid));
    out.weights = def.weights;
    out.m = combine_functionals(out.basis, def.weights);
    out.m_norm = out.m.canonical().norm();
    out.beta = def.beta;
    return out;
}

HilbertVector query_trajectory(const TestOperator& op, const Point& x, double noise_std, const GridPtr& grid, Rng& rng) {
    if (!op.x_domain().contains(x, 1e-12)) throw InputError("query_trajectory: x outside the operator's domain");
    Eigen::VectorXd samples = op.trajectory(x, grid->points());
    if (noise_std > 0.0) {
        std::normal_distribution<double> noise(0.0, noise_std);
        for (Eigen::Index j = 0; j < samples.size(); ++j) samples(j) += noise(rng);
    }
    return fit_from_samples(grid, samples);
}

Eigen::MatrixXd sample_to_canonical(const OutputGrid& grid) {
    return grid.canonical_map() * grid.fit_operator();
}

Eigen::VectorXd objective_values(const TestOperator& op, const GridPtr& grid, const Functional& m,
                                 const Eigen::MatrixXd& candidates) {
    const Eigen::VectorXd a = sample_to_canonical(*grid).transpose() * m.canonical();
    Eigen::VectorXd out(candidates.rows());
    for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
        out(i) = a.dot(op.trajectory(candidates.row(i).transpose(), grid->points()));
    }
    return out;
}

int oracle_resolution(int dim) {
    if (dim == 1) return 10001;
    if (dim == 2) return 501;
    return 51;
}

OracleResult oracle_optimum(const TestOperator& op, const Functional& m, const GridPtr& grid, int refine) {
    const int d = op.x_domain().dim();
    const int res = (oracle_resolution(d) - 1) * std::max(1, refine) + 1;
    const Eigen::MatrixXd pts = lattice(op.x_domain(), std::vector<int>(static_cast<std::size_t>(d), res));
    const Eigen::VectorXd values = objective_values(op, grid, m, pts);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i)
        if (values(i) > values(best)) best = i;
    return {pts.row(best).transpose(), values(best)};
}

}  // namespace vvbo
