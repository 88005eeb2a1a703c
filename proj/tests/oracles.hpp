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

// Reference computations written directly from the defining formulas, with
// no shared code paths with the library's fast implementations.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

namespace oracle {

inline double rbf(const Eigen::VectorXd& x, const Eigen::VectorXd& s, double ell) {
    return std::exp(-0.5 * (x - s).squaredNorm() / (ell * ell));
}

inline Eigen::MatrixXd rbf_gram(const std::vector<Eigen::VectorXd>& X, double ell) {
    const auto t = static_cast<Eigen::Index>(X.size());
    Eigen::MatrixXd G(t, t);
    for (Eigen::Index i = 0; i < t; ++i)
        for (Eigen::Index j = 0; j < t; ++j) G(i, j) = rbf(X[static_cast<std::size_t>(i)], X[static_cast<std::size_t>(j)], ell);
    return G;
}

inline Eigen::VectorXd rbf_cross(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& X, double ell) {
    Eigen::VectorXd k(static_cast<Eigen::Index>(X.size()));
    for (std::size_t i = 0; i < X.size(); ++i) k(static_cast<Eigen::Index>(i)) = rbf(x, X[i], ell);
    return k;
}

/// Block matrix with (i, j) block G(i, j) * BM.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& G, const Eigen::MatrixXd& BM) {
    Eigen::MatrixXd out(G.rows() * BM.rows(), G.cols() * BM.cols());
    for (Eigen::Index i = 0; i < G.rows(); ++i)
        for (Eigen::Index j = 0; j < G.cols(); ++j) out.block(i * BM.rows(), j * BM.cols(), BM.rows(), BM.cols()) = G(i, j) * BM;
    return out;
}

/// log det(I + (G (x) BM) / lambda), assembled densely and factored with LU.
inline double kron_logdet(const Eigen::MatrixXd& G, const Eigen::MatrixXd& BM, double lambda) {
    Eigen::MatrixXd A = kron(G, BM) / lambda;
    A.diagonal().array() += 1.0;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::MatrixXd U = lu.matrixLU().triangularView<Eigen::Upper>();
    double s = 0.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i) s += std::log(std::abs(U(i, i)));
    return s;
}

/// Posterior mean in measurement coordinates: sum_i G(x, x_i) BM a_i with
/// (G (x) BM + lambda I) a = vec(Y); Y holds one observation per row.
inline Eigen::VectorXd dense_mean(const std::vector<Eigen::VectorXd>& X, const Eigen::MatrixXd& Y,
                                  const Eigen::MatrixXd& BM, double lambda, double ell, const Eigen::VectorXd& x) {
    const Eigen::Index q = BM.rows();
    if (X.empty()) return Eigen::VectorXd::Zero(q);
    Eigen::MatrixXd A = kron(rbf_gram(X, ell), BM);
    A.diagonal().array() += lambda;
    Eigen::VectorXd y(static_cast<Eigen::Index>(X.size()) * q);
    for (Eigen::Index i = 0; i < Y.rows(); ++i) y.segment(i * q, q) = Y.row(i).transpose();
    const Eigen::VectorXd a = A.inverse() * y;
    const Eigen::VectorXd k = rbf_cross(x, X, ell);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(q);
    for (Eigen::Index i = 0; i < k.size(); ++i) out += k(i) * BM * a.segment(i * q, q);
    return out;
}

/// Posterior covariance K(x, x) - K_xX (K_XX + lambda I)^{-1} K_Xx in
/// measurement coordinates.
inline Eigen::MatrixXd dense_covariance(const std::vector<Eigen::VectorXd>& X, const Eigen::MatrixXd& BM, double lambda,
                                        double ell, const Eigen::VectorXd& x) {
    const Eigen::Index q = BM.rows();
    Eigen::MatrixXd prior = rbf(x, x, ell) * BM;
    if (X.empty()) return prior;
    Eigen::MatrixXd A = kron(rbf_gram(X, ell), BM);
    A.diagonal().array() += lambda;
    const Eigen::VectorXd k = rbf_cross(x, X, ell);
    Eigen::MatrixXd Kx(static_cast<Eigen::Index>(X.size()) * q, q);
    for (Eigen::Index i = 0; i < k.size(); ++i) Kx.block(i * q, 0, q, q) = k(i) * BM;
    return prior - Kx.transpose() * A.inverse() * Kx;
}

inline double max_eigenvalue(const Eigen::MatrixXd& S) {
    const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

struct ScalarPosterior {
    double mean;
    double variance;
};

/// Textbook GP regression with kernel c * RBF and noise variance lambda.
inline ScalarPosterior scalar_gp(const std::vector<Eigen::VectorXd>& X, const Eigen::VectorXd& y, double lambda,
                                 double ell, double c, const Eigen::VectorXd& x) {
    if (X.empty()) return {0.0, c * rbf(x, x, ell)};
    Eigen::MatrixXd K = c * rbf_gram(X, ell);
    K.diagonal().array() += lambda;
    const Eigen::MatrixXd Kinv = K.inverse();
    const Eigen::VectorXd k = c * rbf_cross(x, X, ell);
    return {k.dot(Kinv * y), c * rbf(x, x, ell) - k.dot(Kinv * k)};
}

/// Random symmetric PSD matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(int q, double lo, double hi, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd Z(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) Z(i, j) = n(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
    const Eigen::MatrixXd Q = qr.householderQ();
    Eigen::VectorXd l(q);
    for (int i = 0; i < q; ++i) l(i) = u(rng);
    Eigen::MatrixXd S = Q * l.asDiagonal() * Q.transpose();
    return 0.5 * (S + S.transpose());
}

inline std::vector<Eigen::VectorXd> random_points(int t, int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Eigen::VectorXd> X;
    for (int i = 0; i < t; ++i) {
        Eigen::VectorXd x(d);
        for (int k = 0; k < d; ++k) x(k) = u(rng);
        X.push_back(x);
    }
    return X;
}

/// Trapezoid weights on a sorted grid.
inline Eigen::VectorXd trapezoid(const Eigen::VectorXd& t) {
    const Eigen::Index n = t.size();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double h = t(i + 1) - t(i);
        w(i) += h / 2;
        w(i + 1) += h / 2;
    }
    return w;
}

}  // namespace oracle
