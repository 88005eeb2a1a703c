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

#include <doctest.h>

#include "core/error.hpp"
#include "core/measurement.hpp"
#include "oracles.hpp"

using namespace vvbo;

namespace {

GridPtr make_grid() {
    return std::make_shared<const OutputGrid>(OutputGrid::grid_points(0.0, 1.0, 50, {0.1, 0.2, 0.3, 0.4}),
                                              ScalarKernel::isotropic(KernelFamily::RBF, 0.1, 1), 0.01);
}

Eigen::VectorXd random_vec(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
    return v;
}

std::vector<Functional> gp_phase_one_basis(const GridPtr& g) {
    std::vector<Functional> b;
    for (double t : {0.0, 0.1, 0.2, 0.3, 0.4}) b.push_back(point_eval_functional(g, t));
    return b;
}

}  // namespace

TEST_CASE("identity with identity B has unit spectrum") {
    const GridPtr g = make_grid();
    const auto M = MeasurementOperator::identity(g);
    CHECK(M.kind() == MeasurementKind::Identity);
    const int r = g->rank();
    const InducedSpectrum s = induced_operator(M, Eigen::MatrixXd::Identity(r, r));
    CHECK(s.rank() == r);
    CHECK((s.eigvals.array() == 1.0).all());
}

TEST_CASE("scalar functional spectrum is its squared norm") {
    const GridPtr g = make_grid();
    const Functional xi = integral_functional(g, Eigen::VectorXd::Ones(50));
    const auto M = MeasurementOperator::scalar(xi);
    CHECK(M.kind() == MeasurementKind::ScalarFunctional);
    const InducedSpectrum s = induced_operator(M, Eigen::MatrixXd::Identity(g->rank(), g->rank()));
    REQUIRE(s.rank() == 1);
    CHECK(s.eigvals(0) == doctest::Approx(inner(xi, xi)).epsilon(1e-9));
    CHECK(std::abs(s.eigvecs(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("orthonormal projection rows give unit eigenvalues") {
    const GridPtr g = make_grid();
    std::vector<Functional> rows;
    for (int k = 0; k < 3; ++k) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(g->rank());
        c(k) = 1.0;
        rows.push_back(from_canonical(g, c));
    }
    const auto M = MeasurementOperator::projection(rows);
    const InducedSpectrum s = induced_operator(M, Eigen::MatrixXd::Identity(g->rank(), g->rank()));
    CHECK(s.rank() == 3);
    CHECK((s.eigvals.array() - 1.0).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("spectrum invariants") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd BM = oracle::random_spd(5, 0.01, 2.0, rng);
        const InducedSpectrum s = spectrum_of(BM);
        CHECK(s.full_trace == doctest::Approx(BM.trace()).epsilon(1e-12));
        CHECK(std::abs(s.eigvals.sum() - BM.trace()) <= 1e-8);
        for (int i = 0; i < s.rank(); ++i) {
            CHECK((BM * s.eigvecs.col(i) - s.eigvals(i) * s.eigvecs.col(i)).norm() <= 1e-8 * s.eigvals(0));
            if (i) CHECK(s.eigvals(i) <= s.eigvals(i - 1));
        }
        const InducedSpectrum e = spectrum_of(BM, TruncationPolicy::energy_fraction(0.8));
        CHECK(e.eigvals.sum() >= 0.8 * BM.trace() - 1e-12);
        CHECK(spectrum_of(BM, TruncationPolicy::fixed_rank(2)).rank() == 2);
    }
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(2, 2) = -1.0;
    CHECK_THROWS_AS(spectrum_of(bad), InputError);
    const GridPtr g = make_grid();
    CHECK_THROWS_AS(induced_operator(MeasurementOperator::identity(g), Eigen::MatrixXd::Identity(3, 3)), InputError);
}

TEST_CASE("measure identity and projection") {
    const GridPtr g = make_grid();
    std::mt19937_64 rng(9);
    const auto Mi = MeasurementOperator::identity(g);
    CHECK(measure(Mi, zero_vector(g)).cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXd y(50);
    for (int j = 0; j < 50; ++j) y(j) = std::cos(3 * g->points()(j));
    const HilbertVector f = fit_from_samples(g, y);
    const auto Mp = MeasurementOperator::projection(gp_phase_one_basis(g));
    const Eigen::VectorXd m = measure(Mp, f);
    REQUIRE(m.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(m(i) - std::cos(3 * 0.1 * i)) <= 0.02);

    const HilbertVector u{random_vec(50, rng), g}, v{random_vec(50, rng), g};
    const Eigen::VectorXd lhs = measure(Mp, 1.5 * u + (-2.0) * v);
    const Eigen::VectorXd rhs = 1.5 * measure(Mp, u) - 2.0 * measure(Mp, v);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * (1 + lhs.cwiseAbs().maxCoeff()));
}

TEST_CASE("functional coordinates") {
    const GridPtr g = make_grid();
    const auto M = MeasurementOperator::projection(gp_phase_one_basis(g));
    const InducedSpectrum s = induced_operator(M, Eigen::MatrixXd::Identity(g->rank(), g->rank()));
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(5);
    e2(1) = 1.0;
    const FunctionalCoords c = functional_coords(M, e2, s);
    CHECK(c.m_norm == 1.0);
    CHECK((s.eigvecs * c.mbar - e2).cwiseAbs().maxCoeff() <= 1e-12);
    const FunctionalCoords z = functional_coords(M, Eigen::VectorXd::Zero(5), s);
    CHECK(z.m_norm == 0.0);
    CHECK(z.mbar.cwiseAbs().maxCoeff() == 0.0);
    const FunctionalCoords first = functional_coords(s, s.eigvecs.col(0));
    CHECK(first.mbar(0) == doctest::Approx(1.0));
    CHECK(first.mbar.tail(first.mbar.size() - 1).cwiseAbs().maxCoeff() <= 1e-12);

    const InducedSpectrum cut = induced_operator(M, Eigen::MatrixXd::Identity(g->rank(), g->rank()),
                                                 TruncationPolicy::fixed_rank(1));
    const FunctionalCoords warn = functional_coords(M, e2, cut);
    CHECK(warn.truncation_warning);
    CHECK_FALSE(warn.warning.empty());
    CHECK_THROWS_AS(functional_coords(M, Eigen::VectorXd::Zero(4), s), InputError);
}

TEST_CASE("adjoint identity") {
    const GridPtr g = make_grid();
    std::mt19937_64 rng(10);
    const auto Mp = MeasurementOperator::projection(gp_phase_one_basis(g));
    const auto Mi = MeasurementOperator::identity(g);
    for (int trial = 0; trial < 10; ++trial) {
        const HilbertVector u{random_vec(50, rng), g};
        const Eigen::VectorXd v = random_vec(5, rng);
        const double lhs = v.dot(measure(Mp, u));
        const double rhs = inner(adjoint_lift(Mp, v), u);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * (1 + std::abs(lhs)));
        const Eigen::VectorXd c = measure(Mi, u);
        CHECK((measure(Mi, adjoint_lift(Mi, c)) - c).cwiseAbs().maxCoeff() <= 1e-8 * (1 + c.cwiseAbs().maxCoeff()));
        CHECK(measure(Mp, u).norm() <= Mp.matrix_canon().norm() * norm(u) + 1e-10);
    }
    const Functional xi = point_eval_functional(g, 0.2);
    const HilbertVector back = adjoint_lift(MeasurementOperator::scalar(xi), Eigen::VectorXd::Ones(1));
    CHECK((back.coeffs - xi.coeffs).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(adjoint_lift(Mp, Eigen::VectorXd::Zero(3)), InputError);
}

TEST_CASE("rank deficiency is reported") {
    const GridPtr g = make_grid();
    const Functional a = point_eval_functional(g, 0.1);
    const auto M = MeasurementOperator::projection({a, a});
    CHECK(M.rank_deficient());
    const InducedSpectrum s = induced_operator(M, Eigen::MatrixXd::Identity(g->rank(), g->rank()));
    CHECK(s.rank() == 1);
}
