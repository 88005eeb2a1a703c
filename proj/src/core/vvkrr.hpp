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

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "core/measurement.hpp"
#include "core/scalar_kernels.hpp"

namespace vvbo {

struct PosteriorHyperparams {
    double lambda = 0.01;       // KRR regularizer, > 0
    double gamma = 1.0;         // RKHS norm bound
    double sigma = 0.0;         // sub-Gaussian noise proxy
    double zeta = 0.1;          // confidence level
    std::optional<double> beta_override;
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Measurement-space kernel ridge regression for a separable kernel
/// G(x, s) * B_M, with B_M = sum_j l_j phi_j phi_j^T truncated to n directions.
///
/// Observations are given in the phi basis (row i of Ybar holds y_i). Each
/// eigendirection is an independent scalar problem with Gram l_j G_XX + lambda I;
/// directions with bitwise-equal eigenvalues share one Cholesky factor.
///
/// Copies are independent snapshots; update() mutates in place and is the only
/// writer.
class Posterior {
public:
    Posterior(ScalarKernel kernel, Eigen::VectorXd eigvals, PosteriorHyperparams hyper,
              int refactor_every = 32);
    Posterior(ScalarKernel kernel, const InducedSpectrum& spectrum, PosteriorHyperparams hyper,
              int refactor_every = 32)
        : Posterior(std::move(kernel), spectrum.eigvals, hyper, refactor_every) {}

    void update(const Point& x, const Eigen::Ref<const Eigen::VectorXd>& ybar);
    [[nodiscard]] Posterior updated(const Point& x, const Eigen::Ref<const Eigen::VectorXd>& ybar) const;

    [[nodiscard]] int size() const { return static_cast<int>(X_.size()); }
    [[nodiscard]] int rank() const { return static_cast<int>(eigvals_.size()); }
    [[nodiscard]] int input_dim() const { return kernel_.dim(); }
    [[nodiscard]] const PointList& inputs() const { return X_; }
    [[nodiscard]] const Eigen::MatrixXd& observations() const { return Ybar_; }
    [[nodiscard]] const Eigen::VectorXd& eigvals() const { return eigvals_; }
    [[nodiscard]] const ScalarKernel& kernel() const { return kernel_; }
    [[nodiscard]] const PosteriorHyperparams& hyper() const { return hyper_; }
    void set_beta_override(std::optional<double> beta) { hyper_.beta_override = beta; }
    /// Number of updates whose input duplicated an earlier one (within 1e-12).
    [[nodiscard]] int duplicate_count() const { return duplicates_; }

    [[nodiscard]] Eigen::VectorXd mean_coords(const Point& x) const;
    [[nodiscard]] double objective_mean(const Point& x, const Eigen::Ref<const Eigen::VectorXd>& mbar) const;
    /// Posterior variance of every eigendirection at x.
    [[nodiscard]] Eigen::VectorXd direction_variances(const Point& x) const;
    [[nodiscard]] double variance_opnorm(const Point& x) const;
    [[nodiscard]] double log_det() const { return log_det_; }
    /// sum_j logdet(I + l_j/lambda G_XX) recomputed from fresh factorizations.
    [[nodiscard]] double log_det_recomputed() const;
    [[nodiscard]] double beta() const;
    [[nodiscard]] Interval confidence_interval(const Point& x, const Eigen::Ref<const Eigen::VectorXd>& mbar,
                                               double m_norm) const;

    /// Batched evaluation over candidate rows.
    struct Batch {
        Eigen::VectorXd objective_mean;  // per candidate
        Eigen::VectorXd opnorm;          // per candidate
        Eigen::MatrixXd mean_coords;     // candidates x n, only when requested
    };
    [[nodiscard]] Batch evaluate(const Eigen::MatrixXd& candidates,
                                 const Eigen::Ref<const Eigen::VectorXd>& mbar,
                                 bool with_mean_coords = false) const;

private:
    struct Group {
        double eigval = 0.0;
        std::vector<Eigen::Index> dirs;
        Eigen::MatrixXd chol;   // lower Cholesky factor of eigval * G_XX + lambda I
        Eigen::MatrixXd alpha;  // t x |dirs|, (eigval G_XX + lambda I)^{-1} Ybar[:, dirs]
    };

    void refactor();
    void refresh_alpha(Group& g) const;
    void check_point(const Point& x) const;
    [[nodiscard]] Eigen::VectorXd objective_weights(const Eigen::Ref<const Eigen::VectorXd>& mbar) const;

    ScalarKernel kernel_;
    Eigen::VectorXd eigvals_;
    PosteriorHyperparams hyper_;
    int refactor_every_;
    PointList X_;
    Eigen::MatrixXd Ybar_;
    std::vector<Group> groups_;
    double log_det_ = 0.0;
    int updates_since_refactor_ = 0;
    int duplicates_ = 0;
};

/// Confidence radius from the regularizer, norm bound, noise proxy and the
/// information term log det(I + K/lambda).
double theoretical_beta(const PosteriorHyperparams& hyper, double log_det);

/// Dense reference for the posterior mean: assembles the full (t q) x (t q)
/// block system (G(x_i, x_j) B_M + lambda I) a = y in measurement coordinates,
/// solves it, and returns the phi-basis coordinates of sum_i G(x, x_i) B_M a_i.
/// Intended for small problems only.
Eigen::VectorXd representer_oracle(const ScalarKernel& kernel, const PointList& X,
                                   const Eigen::MatrixXd& Ybar, const InducedSpectrum& spectrum,
                                   double lambda, const Point& x);

}  // namespace vvbo
