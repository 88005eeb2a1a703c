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

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "core/baselines.hpp"
#include "core/benchmarks.hpp"
#include "core/error.hpp"
#include "core/measurement.hpp"

using namespace vvbo;

namespace {

Point p1(double v) { return Point::Constant(1, v); }

GridPtr grid_for(BenchmarkId id) {
    const auto s = BenchmarkSetup::defaults(id);
    return make_benchmark_grid(id, s.n_grid, s.fit_reg, s.output_length_scale);
}

}  // namespace

TEST_CASE("closed-form examples") {
    const auto ackley = TestOperator::make(BenchmarkId::Ackley);
    CHECK(eval_ground_truth(ackley, p1(0.0), 0.0) == doctest::Approx(20.0).epsilon(1e-12));
    const auto holder = TestOperator::make(BenchmarkId::HolderTable);
    for (double t : {-10.0, -3.3, 0.0, 4.2, 10.0}) CHECK(std::abs(eval_ground_truth(holder, p1(0.0), t)) <= 1e-12);
    const auto bukin = TestOperator::make(BenchmarkId::Bukin);
    CHECK(eval_ground_truth(bukin, p1(-10.0), 1.0) == doctest::Approx(180.0).epsilon(1e-12));
    CHECK_THROWS_AS(eval_ground_truth(bukin, p1(0.0), 1.0), InputError);
    CHECK_THROWS_AS(eval_ground_truth(ackley, p1(0.0), 40.0), InputError);
    CHECK_THROWS_AS(eval_ground_truth(ackley, Point::Zero(2), 0.0), InputError);
    for (BenchmarkId id : all_benchmarks()) {
        const auto op = TestOperator::make(id);
        CHECK(parse_benchmark(benchmark_name(id)) == id);
        const Point mid = 0.5 * (op.x_domain().lower + op.x_domain().upper);
        const double tm = 0.5 * (op.t_lo() + op.t_hi());
        CHECK(std::isfinite(eval_ground_truth(op, mid, tm)));
        const Eigen::VectorXd ts = Eigen::VectorXd::LinSpaced(7, op.t_lo(), op.t_hi());
        const Eigen::VectorXd traj = op.trajectory(mid, ts);
        for (Eigen::Index k = 0; k < ts.size(); ++k) CHECK(traj(k) == doctest::Approx(op.value(mid, ts(k))).epsilon(1e-12));
    }
    CHECK_THROWS(parse_benchmark("rosenbrock"));
}

TEST_CASE("GP operators are frozen by their seed") {
    const auto a = TestOperator::make(BenchmarkId::GP);
    const auto b = TestOperator::make(BenchmarkId::GP);
    const auto c = TestOperator::make(BenchmarkId::GP, 17);
    CHECK(a.gp_coefficients().rows() == 10);
    CHECK(a.gp_coefficients().cols() == 10);
    CHECK(a.gp_coefficients().cwiseAbs().maxCoeff() <= 3.5);
    CHECK((a.gp_coefficients().array() == b.gp_coefficients().array()).all());
    CHECK((a.gp_coefficients().array() != c.gp_coefficients().array()).any());
    const auto g3 = TestOperator::make(BenchmarkId::GP3D);
    CHECK(g3.gp_coefficients().rows() == 125);
    CHECK(g3.x_domain().dim() == 3);
    CHECK(a.value(p1(0.42), 0.3) == b.value(p1(0.42), 0.3));
}

TEST_CASE("table schedules") {
    const GridPtr g = grid_for(BenchmarkId::GP);
    const PhaseSchedule gp = table_schedule(BenchmarkId::GP, *g, kDefaultBenchmarkSeed, 50);
    REQUIRE(gp.phases.size() == 3);
    CHECK(gp.total_iterations() == 150);
    CHECK(gp.phase_of(1) == 1);
    CHECK(gp.phase_of(50) == 1);
    CHECK(gp.phase_of(51) == 2);
    CHECK(gp.phase_of(150) == 3);
    const std::vector<double> t1{0.0, 0.1, 0.2, 0.3, 0.4};
    for (std::size_t i = 0; i < 5; ++i) CHECK(gp.phases[0].basis[i].t == t1[i]);
    CHECK((gp.phases[0].weights.array() == 0.2).all());
    CHECK(gp.phases[1].weights == (Eigen::VectorXd(5) << 0, 1, 0, 0, 0).finished());
    CHECK(gp.phases[1].beta == 6.0);
    CHECK(same_basis(gp.phases[0], gp.phases[1]));
    CHECK_FALSE(same_basis(gp.phases[1], gp.phases[2]));

    const GridPtr ge = grid_for(BenchmarkId::Eggholder);
    const PhaseSchedule egg = table_schedule(BenchmarkId::Eggholder, *ge, kDefaultBenchmarkSeed, 50);
    const std::vector<double> t3{0, -100, -200, -300, -400};
    for (std::size_t i = 0; i < 5; ++i) CHECK(egg.phases[2].basis[i].t == t3[i]);
    CHECK(egg.phases[2].weights == (Eigen::VectorXd(5) << 0, 0, 0, 0, 1).finished());
    CHECK(egg.phases[2].beta == 300.0);

    for (BenchmarkId id : all_benchmarks()) {
        const GridPtr grid = grid_for(id);
        const PhaseSchedule s = table_schedule(id, *grid, kDefaultBenchmarkSeed, 5);
        CHECK_NOTHROW(s.validate_table_rules());
        for (double t : schedule_eval_points(id)) CHECK(grid->index_of(t).has_value());
        for (int ph = 1; ph <= 3; ++ph) {
            const PhaseObjective o = phase_objective(s, ph, grid);
            CHECK(o.basis.size() == 5);
            CHECK(o.m_norm >= 0.0);
            CHECK(o.m_norm == doctest::Approx(norm(o.m)).epsilon(1e-8));
        }
    }

    PhaseSchedule broken = gp;
    broken.phases[1].basis[0].t = 0.9;
    CHECK_THROWS_AS(broken.validate_table_rules(), ConfigError);
}

TEST_CASE("unit weights select a single functional") {
    const GridPtr g = grid_for(BenchmarkId::GP);
    const auto op = TestOperator::make(BenchmarkId::GP);
    Rng rng(1);
    const HilbertVector f = query_trajectory(op, p1(0.37), 0.0, g, rng);
    PhaseSchedule s = table_schedule(BenchmarkId::GP, *g, kDefaultBenchmarkSeed, 1);
    const PhaseObjective o = phase_objective(s, 2, g);
    CHECK(inner(o.m, f) == doctest::Approx(inner(o.basis[1], f)).epsilon(1e-12));
    CHECK(std::abs(inner(o.basis[1], f) - op.value(p1(0.37), 0.1)) <= 0.05);
    CHECK_THROWS_AS(phase_objective(s, 4, g), InputError);
}

TEST_CASE("integral weight curves") {
    const Eigen::VectorXd a = integral_weight_curve(kDefaultBenchmarkSeed, 1, 2, 50);
    const Eigen::VectorXd b = integral_weight_curve(kDefaultBenchmarkSeed, 1, 2, 50);
    const Eigen::VectorXd c = integral_weight_curve(kDefaultBenchmarkSeed, 2, 2, 50);
    CHECK(a.size() == 50);
    CHECK((a.array() >= 0.0).all());
    CHECK((a.array() <= 1.0).all());
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("trajectory queries") {
    const GridPtr g = grid_for(BenchmarkId::GP);
    const auto op = TestOperator::make(BenchmarkId::GP);
    const Point x = p1(0.61);
    Rng r1(5), r2(5), r3(6);
    const HilbertVector clean1 = query_trajectory(op, x, 0.0, g, r1);
    const HilbertVector clean2 = query_trajectory(op, x, 0.0, g, r3);
    CHECK(clean1.coeffs == clean2.coeffs);
    Rng a(5), b(5), c(6);
    const HilbertVector n1 = query_trajectory(op, x, 0.1, g, a);
    const HilbertVector n2 = query_trajectory(op, x, 0.1, g, b);
    const HilbertVector n3 = query_trajectory(op, x, 0.1, g, c);
    CHECK(n1.coeffs == n2.coeffs);
    CHECK(n1.coeffs != n3.coeffs);
    CHECK_THROWS_AS(query_trajectory(op, p1(1.5), 0.0, g, a), InputError);

    // Law of large numbers on the canonical coordinates.
    const double std = 0.05;
    Rng rng(77);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(g->rank());
    for (int i = 0; i < 1000; ++i) mean += query_trajectory(op, x, std, g, rng).canonical();
    mean /= 1000.0;
    const Eigen::VectorXd diff = (mean - clean1.canonical()).cwiseAbs();
    const Eigen::MatrixXd S = sample_to_canonical(*g);
    for (Eigen::Index k = 0; k < diff.size(); ++k) {
        const double coord_std = std * S.row(k).norm();
        CHECK(diff(k) <= 3.0 * coord_std / std::sqrt(1000.0) + 1e-12);
    }
}

TEST_CASE("fits are Lipschitz in the samples") {
    const GridPtr g = grid_for(BenchmarkId::GP);
    Eigen::MatrixXd Kreg = g->gram();
    Kreg.diagonal().array() += g->fit_reg();
    const double opnorm = 1.0 / Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Kreg).eigenvalues().minCoeff();
    const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(50, -1.0, 1.0);
    const double delta = 0.3;
    for (int j : {0, 13, 49}) {
        Eigen::VectorXd z = y;
        z(j) += delta;
        const Eigen::VectorXd d = fit_from_samples(g, z).coeffs - fit_from_samples(g, y).coeffs;
        CHECK(d.cwiseAbs().maxCoeff() <= opnorm * delta * (1 + 1e-9));
    }
}

TEST_CASE("oracle optimum") {
    const StructuredProblem p(BenchmarkSetup::defaults(BenchmarkId::GP));
    Rng rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int ph = 1; ph <= 3; ++ph) {
        const double opt = p.optimum(ph);
        CHECK(p.objective(p.argmax(ph), ph) == doctest::Approx(opt).epsilon(1e-12));
        double worst = -1e300;
        for (int i = 0; i < 1000; ++i) worst = std::max(worst, p.objective(p1(u(rng)), ph) - opt);
        // The oracle is a lattice maximiser; off-lattice points may beat it by
        // the O(h^2) discretisation error.
        CHECK(worst <= 1e-6 * (1.0 + std::abs(opt)));
        const OracleResult fine = oracle_optimum(p.op(), p.phase(ph).m, p.grid(), 2);
        CHECK(std::abs(fine.value - opt) <= 0.005 * std::abs(opt));
        CHECK(fine.value >= opt - 1e-12);
    }
    CHECK(oracle_resolution(1) == 10001);
    CHECK(oracle_resolution(2) == 501);
    CHECK(oracle_resolution(3) == 51);

    const auto op = TestOperator::make(BenchmarkId::GP);
    const OracleResult zero = oracle_optimum(op, zero_vector(p.grid()), p.grid());
    CHECK(zero.x(0) == 0.0);
    CHECK(zero.value == 0.0);
}

TEST_CASE("partial and full objectives agree") {
    const StructuredProblem p(BenchmarkSetup::defaults(BenchmarkId::GP));
    const Point x = p1(0.29);
    const HilbertVector f = fit_from_samples(p.grid(), p.op().trajectory(x, p.grid()->points()));
    for (int ph = 1; ph <= 3; ++ph) {
        const PhaseObjective& o = p.phase(ph);
        const auto M = MeasurementOperator::projection(o.basis);
        const double partial = o.weights.dot(measure(M, f));
        const double full = inner(o.m, f);
        CHECK(std::abs(partial - full) <= 1e-8);
        CHECK(std::abs(p.objective(x, ph) - full) <= 1e-8 * (1 + std::abs(full)));
        CHECK(p.phase_canonical(ph).dot(p.canonical(x)) == doctest::Approx(full).epsilon(1e-8));
    }
}

TEST_CASE("benchmark setups load for every operator") {
    for (BenchmarkId id : all_benchmarks()) {
        if (id == BenchmarkId::GP3D) continue;
        BenchmarkSetup s = BenchmarkSetup::defaults(id);
        s.iterations_per_phase = 2;
        const StructuredProblem p(s);
        CHECK(p.num_phases() == 3);
        for (int ph = 1; ph <= 3; ++ph) CHECK(std::isfinite(p.optimum(ph)));
        const Eigen::VectorXd lo = p.domain().lower;
        CHECK(p.objective(lo, 1) <= p.optimum(1) + 1e-9);
    }
}
