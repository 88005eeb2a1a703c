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

#include <Eigen/Eigenvalues>

#include "core/error.hpp"
#include "core/scalar_kernels.hpp"
#include "oracles.hpp"

using namespace vvbo;

namespace {

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p(i++) = x;
    return p;
}

}  // namespace

TEST_CASE("rbf has unit diagonal and the closed-form off-diagonal") {
    const ScalarKernel k = ScalarKernel::isotropic(KernelFamily::RBF, 1.0, 1);
    CHECK(kernel_eval(k, pt({0.3}), pt({0.3})) == 1.0);
    CHECK(kernel_eval(k, pt({0.0}), pt({1.0})) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(kernel_eval(k, pt({0.0}), pt({1.0})) == doctest::Approx(0.606531).epsilon(1e-6));
}

TEST_CASE("linear kernel is the dot product") {
    const ScalarKernel k = ScalarKernel::isotropic(KernelFamily::Linear, 1.0, 2);
    CHECK(kernel_eval(k, pt({1, 2}), pt({3, 4})) == 11.0);
}

TEST_CASE("matern closed forms") {
    const double r = 0.7;
    const ScalarKernel m52 = ScalarKernel::isotropic(KernelFamily::Matern, 1.0, 1, 1.0, 2.5);
    const ScalarKernel m32 = ScalarKernel::isotropic(KernelFamily::Matern, 1.0, 1, 1.0, 1.5);
    const double s5 = std::sqrt(5.0) * r, s3 = std::sqrt(3.0) * r;
    CHECK(kernel_eval(m52, pt({0.0}), pt({r})) == doctest::Approx((1 + s5 + 5 * r * r / 3) * std::exp(-s5)).epsilon(1e-14));
    CHECK(kernel_eval(m32, pt({0.0}), pt({r})) == doctest::Approx((1 + s3) * std::exp(-s3)).epsilon(1e-14));
    CHECK(kernel_eval(m52, pt({0.2}), pt({0.2})) == 1.0);
}

TEST_CASE("anisotropic distance scales each coordinate") {
    Eigen::VectorXd ell(2);
    ell << 0.5, 2.0;
    const ScalarKernel k = ScalarKernel::rbf(ell);
    const double r2 = std::pow(0.3 / 0.5, 2) + std::pow(1.0 / 2.0, 2);
    CHECK(kernel_eval(k, pt({0.0, 0.0}), pt({0.3, 1.0})) == doctest::Approx(std::exp(-0.5 * r2)).epsilon(1e-14));
}

TEST_CASE("kernel construction and evaluation validate inputs") {
    CHECK_THROWS_AS(ScalarKernel(KernelFamily::RBF, Eigen::VectorXd::Constant(1, 0.0)), InputError);
    CHECK_THROWS_AS(ScalarKernel(KernelFamily::RBF, Eigen::VectorXd::Constant(1, -1.0)), InputError);
    CHECK_THROWS_AS(ScalarKernel(KernelFamily::Matern, Eigen::VectorXd::Constant(1, 1.0), 1.0, 0.5), InputError);
    const ScalarKernel k = ScalarKernel::isotropic(KernelFamily::RBF, 1.0, 2);
    CHECK_THROWS_AS((void)kernel_eval(k, pt({1.0}), pt({1.0, 2.0})), InputError);
    CHECK_THROWS_AS(parse_kernel_family("cosine"), InputError);
    CHECK(parse_kernel_family("matern") == KernelFamily::Matern);
}

TEST_CASE("gram examples") {
    const ScalarKernel k = ScalarKernel::isotropic(KernelFamily::RBF, 0.2, 1);
    const Eigen::MatrixXd one = gram(k, {pt({0.4})});
    CHECK(one.rows() == 1);
    CHECK(one(0, 0) == 1.0);
    const Eigen::MatrixXd dup = gram(k, {pt({0.4}), pt({0.4})});
    CHECK((dup.array() == 1.0).all());
    CHECK(duplicate_pairs({pt({0.4}), pt({0.1}), pt({0.4})}).size() == 1);

    std::mt19937_64 rng(3);
    const auto X = oracle::random_points(3, 1, rng);
    const Eigen::MatrixXd G = gram(k, X);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().minCoeff() >= -1e-10);
    CHECK((G - oracle::rbf_gram(X, 0.2)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("cross gram examples") {
    const ScalarKernel k = ScalarKernel::isotropic(KernelFamily::RBF, 0.3, 2);
    std::mt19937_64 rng(5);
    const auto X = oracle::random_points(6, 2, rng);
    const Eigen::MatrixXd G = gram(k, X);
    for (int i = 0; i < 6; ++i) {
        const Eigen::VectorXd row = cross_gram(k, X[static_cast<std::size_t>(i)], X);
        CHECK(row(i) == 1.0);
        CHECK((row - G.row(i).transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(cross_gram(k, X[0], {}).size() == 0);
    CHECK_THROWS_AS(cross_gram(k, pt({0.1}), X), InputError);

    Eigen::MatrixXd cand(2, 2);
    cand << 0.1, 0.2, 0.5, 0.9;
    const Eigen::MatrixXd rows = cross_gram_rows(k, cand, X);
    for (int i = 0; i < 2; ++i)
        CHECK((rows.row(i).transpose() - oracle::rbf_cross(cand.row(i).transpose(), X, 0.3)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("box domain") {
    CHECK_THROWS_AS(BoxDomain::interval(1.0, 1.0), InputError);
    const BoxDomain d = BoxDomain::cube(0.0, 1.0, 2);
    CHECK(d.dim() == 2);
    CHECK(d.contains(pt({0.0, 1.0})));
    CHECK_FALSE(d.contains(pt({-0.1, 0.5})));
    const Point c = d.clip(pt({-1.0, 2.0}));
    CHECK(c(0) == 0.0);
    CHECK(c(1) == 1.0);
}
