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
#include <filesystem>
#include <random>

#include <doctest.h>

#include "core/error.hpp"
#include "core/measurement.hpp"
#include "core/snapshot.hpp"
#include "core/vvkrr.hpp"
#include "oracles.hpp"

using namespace vvbo;

namespace {

ScalarKernel rbf1(double ell = 0.2) { return ScalarKernel::isotropic(KernelFamily::RBF, ell, 1); }

Point pt(double v) { return Point::Constant(1, v); }

PosteriorHyperparams hyper(double lambda = 0.01) {
    PosteriorHyperparams h;
    h.lambda = lambda;
    h.gamma = 1.0;
    h.sigma = 0.1;
    h.zeta = 0.1;
    return h;
}

Eigen::VectorXd normal_vec(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
    return v;
}

}  // namespace

TEST_CASE("single observation examples") {
    Posterior p(rbf1(), Eigen::VectorXd::Ones(1), hyper());
    CHECK(p.beta() == doctest::Approx(1.0 + std::sqrt(2.0 * std::log(10.0))).epsilon(1e-12));
    CHECK(p.beta() == doctest::Approx(3.1459).epsilon(1e-4));
    CHECK(p.log_det() == 0.0);
    CHECK(p.variance_opnorm(pt(0.3)) == doctest::Approx(1.0));
    CHECK(p.mean_coords(pt(0.3))(0) == 0.0);

    p.update(pt(0.5), Eigen::VectorXd::Constant(1, 2.0));
    CHECK(p.log_det() == doctest::Approx(std::log(101.0)).epsilon(1e-12));
    CHECK(p.log_det() == doctest::Approx(4.61512).epsilon(1e-5));
    CHECK(p.mean_coords(pt(0.5))(0) == doctest::Approx(2.0 / 1.01).epsilon(1e-12));
    CHECK(p.mean_coords(pt(0.5))(0) == doctest::Approx(0.990099 * 2.0).epsilon(1e-6));
    CHECK(p.variance_opnorm(pt(0.5)) == doctest::Approx(1.0 - 1.0 / 1.01).epsilon(1e-10));
    CHECK(p.variance_opnorm(pt(0.5)) == doctest::Approx(0.00990099).epsilon(1e-6));

    Posterior two(rbf1(), (Eigen::VectorXd(2) << 1.0, 0.5).finished(), hyper());
    two.update(pt(0.5), Eigen::Vector2d(1.0, -1.0));
    CHECK(two.log_det() == doctest::Approx(std::log(101.0) + std::log(51.0)).epsilon(1e-12));
    CHECK(two.log_det() == doctest::Approx(8.547).epsilon(1e-4));
    CHECK(two.log_det() == doctest::Approx(two.log_det_recomputed()).epsilon(1e-10));
}

TEST_CASE("beta override") {
    auto h = hyper();
    h.beta_override = 2.0;
    Posterior p(rbf1(), Eigen::VectorXd::Ones(2), h);
    p.update(pt(0.1), Eigen::Vector2d(0.0, 1.0));
    CHECK(p.beta() == 2.0);
    p.set_beta_override(std::nullopt);
    CHECK(p.beta() == doctest::Approx(theoretical_beta(p.hyper(), p.log_det())));
    CHECK(p.beta() > 3.0);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(Posterior(rbf1(), Eigen::VectorXd::Ones(1), hyper(0.0)), InputError);
    CHECK_THROWS_AS(Posterior(rbf1(), Eigen::VectorXd::Zero(1), hyper()), InputError);
    auto h = hyper();
    h.zeta = 1.0;
    CHECK_THROWS_AS(Posterior(rbf1(), Eigen::VectorXd::Ones(1), h), InputError);
    Posterior p(rbf1(), Eigen::VectorXd::Ones(2), hyper());
    CHECK_THROWS_AS(p.update(pt(0.1), Eigen::VectorXd::Ones(3)), InputError);
    CHECK_THROWS_AS(p.update(Point::Zero(2), Eigen::VectorXd::Ones(2)), InputError);
    CHECK_THROWS_AS(p.update(pt(0.1), Eigen::Vector2d(1.0, std::nan(""))), InputError);
    CHECK_THROWS_AS((void)p.objective_mean(pt(0.1), Eigen::VectorXd::Ones(3)), InputError);
    CHECK(p.size() == 0);
}

TEST_CASE("agrees with dense block regression") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const int q = 1 + trial % 4;
        const double ell = 0.3;
        const double lambda = trial % 2 ? 0.01 : 0.3;
        const Eigen::MatrixXd BM = oracle::random_spd(q, 0.2, 2.0, rng);
        const InducedSpectrum s = spectrum_of(BM);
        REQUIRE(s.rank() == q);
        Posterior p(ScalarKernel::isotropic(KernelFamily::RBF, ell, 2), s, hyper(lambda), 4);
        const auto X = oracle::random_points(9, 2, rng);
        Eigen::MatrixXd Y(9, q);
        for (int i = 0; i < 9; ++i) {
            Y.row(i) = normal_vec(q, rng).transpose();
            p.update(X[static_cast<std::size_t>(i)], s.to_basis(Y.row(i).transpose()));
        }
        CHECK(p.log_det() == doctest::Approx(oracle::kron_logdet(oracle::rbf_gram(X, ell), BM, lambda)).epsilon(1e-8));
        CHECK(p.log_det_recomputed() == doctest::Approx(p.log_det()).epsilon(1e-8));
        const auto probes = oracle::random_points(5, 2, rng);
        Eigen::MatrixXd cand(5, 2);
        for (int j = 0; j < 5; ++j) cand.row(j) = probes[static_cast<std::size_t>(j)].transpose();
        const Eigen::VectorXd w = normal_vec(q, rng);
        const auto batch = p.evaluate(cand, s.to_basis(w), true);
        for (int j = 0; j < 5; ++j) {
            const Point& x = probes[static_cast<std::size_t>(j)];
            const Eigen::VectorXd mu = oracle::dense_mean(X, Y, BM, lambda, ell, x);
            const Eigen::MatrixXd cov = oracle::dense_covariance(X, BM, lambda, ell, x);
            CHECK((s.from_basis(p.mean_coords(x)) - mu).cwiseAbs().maxCoeff() <= 1e-8 * (1 + mu.cwiseAbs().maxCoeff()));
            CHECK(std::abs(p.objective_mean(x, s.to_basis(w)) - w.dot(mu)) <= 1e-8 * (1 + std::abs(w.dot(mu))));
            CHECK(std::abs(p.variance_opnorm(x) - oracle::max_eigenvalue(cov)) <= 1e-8);
            CHECK(std::abs(batch.objective_mean(j) - w.dot(mu)) <= 1e-8 * (1 + std::abs(w.dot(mu))));
            CHECK(std::abs(batch.opnorm(j) - p.variance_opnorm(x)) <= 1e-10);
            CHECK((batch.mean_coords.row(j).transpose() - p.mean_coords(x)).cwiseAbs().maxCoeff() <= 1e-10);
            const Eigen::VectorXd rep = representer_oracle(p.kernel(), X, p.observations(), s, lambda, x);
            CHECK((rep - p.mean_coords(x)).cwiseAbs().maxCoeff() <= 1e-8 * (1 + rep.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("confidence interval width") {
    Posterior p(rbf1(), (Eigen::VectorXd(2) << 2.0, 0.5).finished(), hyper());
    p.update(pt(0.2), Eigen::Vector2d(1.0, 0.5));
    const Eigen::Vector2d mbar(0.6, 0.8);
    const Interval ci = p.confidence_interval(pt(0.7), mbar, 1.0);
    const double center = p.objective_mean(pt(0.7), mbar);
    CHECK(0.5 * (ci.lower + ci.upper) == doctest::Approx(center));
    CHECK(ci.upper - ci.lower == doctest::Approx(2.0 * p.beta() * std::sqrt(p.variance_opnorm(pt(0.7)))));
    const Interval zero = p.confidence_interval(pt(0.7), Eigen::Vector2d::Zero(), 0.0);
    CHECK(zero.lower == zero.upper);
}

TEST_CASE("duplicate inputs are kept and counted") {
    Posterior p(rbf1(), Eigen::VectorXd::Ones(1), hyper());
    p.update(pt(0.4), Eigen::VectorXd::Constant(1, 1.0));
    p.update(pt(0.4), Eigen::VectorXd::Constant(1, 3.0));
    CHECK(p.size() == 2);
    CHECK(p.duplicate_count() == 1);
    CHECK(p.mean_coords(pt(0.4))(0) == doctest::Approx(4.0 / 2.01).epsilon(1e-10));
    CHECK(p.log_det() == doctest::Approx(std::log(201.0)).epsilon(1e-10));
}

TEST_CASE("rank-one updates match periodic refactorisation") {
    std::mt19937_64 rng(5);
    const auto X = oracle::random_points(40, 1, rng);
    Posterior lazy(rbf1(0.1), Eigen::Vector3d(1.5, 1.5, 0.2), hyper(), 1000);
    Posterior eager(rbf1(0.1), Eigen::Vector3d(1.5, 1.5, 0.2), hyper(), 1);
    for (const auto& x : X) {
        const Eigen::VectorXd y = normal_vec(3, rng);
        lazy.update(x, y);
        eager.update(x, y);
    }
    const Point probe = pt(0.37);
    CHECK((lazy.mean_coords(probe) - eager.mean_coords(probe)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(std::abs(lazy.variance_opnorm(probe) - eager.variance_opnorm(probe)) <= 1e-10);
    CHECK(lazy.log_det() == doctest::Approx(eager.log_det()).epsilon(1e-12));
}

TEST_CASE("snapshot round trip") {
    std::mt19937_64 rng(6);
    auto h = hyper();
    h.beta_override = 1.7;
    Posterior p(ScalarKernel::isotropic(KernelFamily::Matern, 0.5, 2, 1.0, 2.5), Eigen::Vector2d(1.0, 0.25), h);
    for (const auto& x : oracle::random_points(7, 2, rng)) p.update(x, normal_vec(2, rng));
    const auto path = std::filesystem::temp_directory_path() / "vvbo_snapshot_test.json";
    save_posterior(path, p);
    const Posterior back = load_posterior(path);
    std::filesystem::remove(path);
    CHECK(back.size() == p.size());
    CHECK(back.beta() == p.beta());
    CHECK(back.log_det() == doctest::Approx(p.log_det()).epsilon(1e-14));
    const Point probe = Eigen::Vector2d(0.3, 0.8);
    CHECK((back.mean_coords(probe) - p.mean_coords(probe)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(back.variance_opnorm(probe) == doctest::Approx(p.variance_opnorm(probe)).epsilon(1e-12));
    CHECK_THROWS(posterior_from_json(nlohmann::json{{"format", "other"}}));
}
