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

#include "core/vvkrr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "core/error.hpp"

namespace vvbo {

Posterior::Posterior(ScalarKernel kernel, Eigen::VectorXd eigvals, PosteriorHyperparams hyper,
                     int refactor_every)
    : kernel_(std::move(kernel)),
      eigvals_(std::move(eigvals)),
      hyper_(hyper),
      refactor_every_(std::max(1, refactor_every)),
      Ybar_(0, eigvals_.size()) {
    if (!(hyper_.lambda > 0.0)) throw InputError("posterior regularizer lambda must be positive");
    if (hyper_.gamma < 0.0 || hyper_.sigma < 0.0) throw InputError("gamma and sigma must be nonnegative");
    if (!(hyper_.zeta > 0.0 && hyper_.zeta < 1.0)) throw InputError("zeta must lie in (0, 1)");
    if (hyper_.beta_override && *hyper_.beta_override < 0.0) throw InputError("beta override must be >= 0");
    if ((eigvals_.array() <= 0.0).any()) throw InputError("spectrum eigenvalues must be positive");
    for (Eigen::Index j = 0; j < eigvals_.size(); ++j) {
        auto it = std::find_if(groups_.begin(), groups_.end(),
                               [&](const Group& g) { return g.eigval == eigvals_(j); });
        if (it == groups_.end()) {
            groups_.push_back(Group{eigvals_(j), {j}, Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 1)});
        } else {
            it->dirs.push_back(j);
        }
    }
    for (auto& g : groups_) g.alpha.resize(0, static_cast<Eigen::Index>(g.dirs.size()));
}

void Posterior::check_point(const Point& x) const {
    if (x.size() != kernel_.dim()) {
        throw InputError("posterior query has dimension " + std::to_string(x.size()) +
                         ", kernel expects " + std::to_string(kernel_.dim()));
    }
}

void Posterior::refresh_alpha(Group& g) const {
    const Eigen::Index t = size();
    Eigen::MatrixXd rhs(t, static_cast<Eigen::Index>(g.dirs.size()));
    for (std::size_t k = 0; k < g.dirs.size(); ++k) rhs.col(static_cast<Eigen::Index>(k)) = Ybar_.col(g.dirs[k]);
    if (t == 0) {
        g.alpha = rhs;
        return;
    }
    g.chol.triangularView<Eigen::Lower>().solveInPlace(rhs);
    g.chol.triangularView<Eigen::Lower>().transpose().solveInPlace(rhs);
    g.alpha = std::move(rhs);
}

void Posterior::refactor() {
    const Eigen::MatrixXd G = gram(kernel_, X_);
    for (auto& g : groups_) {
        Eigen::MatrixXd A = g.eigval * G;
        A.diagonal().array() += hyper_.lambda;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success) throw InternalError("posterior Gram factorization failed");
        g.chol = llt.matrixL();
    }
    updates_since_refactor_ = 0;
}

void Posterior::update(const Point& x, const Eigen::Ref<const Eigen::VectorXd>& ybar) {
    check_point(x);
    if (ybar.size() != eigvals_.size()) {
        throw InputError("observation has " + std::to_string(ybar.size()) + " coordinates, posterior rank is " +
                         std::to_string(eigvals_.size()));
    }
    if (!ybar.allFinite()) throw InputError("non-finite observation");
    if (!x.allFinite()) throw InputError("non-finite query point");
    if (contains_point(X_, x)) ++duplicates_;

    const Eigen::Index t = size();
    const Eigen::VectorXd k = cross_gram(kernel_, x, X_);
    const double kxx = kernel_(x, x);

    // Telescoping log-det increment and rank-one factor extension share the
    // same triangular solve.
    double increment = 0.0;
    for (auto& g : groups_) {
        Eigen::VectorXd l = g.eigval * k;
        if (t > 0) g.chol.triangularView<Eigen::Lower>().solveInPlace(l);
        const double d2 = g.eigval * kxx + hyper_.lambda - l.squaredNorm();
        // d2 = lambda + posterior variance >= lambda in exact arithmetic.
        const double d2c = std::max(d2, hyper_.lambda);
        increment += static_cast<double>(g.dirs.size()) * std::log(d2c / hyper_.lambda);
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(t + 1, t + 1);
        if (t > 0) {
            next.topLeftCorner(t, t) = g.chol;
            next.block(t, 0, 1, t) = l.transpose();
        }
        next(t, t) = std::sqrt(d2c);
        g.chol = std::move(next);
    }
    log_det_ += increment;

    X_.push_back(x);
    Ybar_.conservativeResize(t + 1, Eigen::NoChange);
    Ybar_.row(t) = ybar.transpose();

    if (++updates_since_refactor_ >= refactor_every_) refactor();
    for (auto& g : groups_) refresh_alpha(g);
}

Posterior Posterior::updated(const Point& x, const Eigen::Ref<const Eigen::VectorXd>& ybar) const {
    Posterior next(*this);
    next.update(x, ybar);
    return next;
}

Eigen::VectorXd Posterior::mean_coords(const Point& x) const {
    check_point(x);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(rank());
    if (X_.empty()) return out;
    const Eigen::VectorXd k = cross_gram(kernel_, x, X_);
    for (const auto& g : groups_) {
        const Eigen::VectorXd proj = g.alpha.transpose() * k;
        for (std::size_t i = 0; i < g.dirs.size(); ++i) out(g.dirs[i]) = g.eigval * proj(static_cast<Eigen::Index>(i));
    }
    return out;
}

Eigen::VectorXd Posterior::objective_weights(const Eigen::Ref<const Eigen::VectorXd>& mbar) const {
    if (mbar.size() != rank()) {
        throw InputError("objective coordinates have length " + std::to_string(mbar.size()) +
                         ", posterior rank is " + std::to_string(rank()));
    }
    Eigen::VectorXd w = Eigen::VectorXd::Zero(size());
    for (const auto& g : groups_) {
        for (std::size_t i = 0; i < g.dirs.size(); ++i) {
            const double coef = mbar(g.dirs[i]) * g.eigval;
            if (coef != 0.0) w += coef * g.alpha.col(static_cast<Eigen::Index>(i));
        }
    }
    return w;
}

double Posterior::objective_mean(const Point& x, const Eigen::Ref<const Eigen::VectorXd>& mbar) const {
    check_point(x);
    const Eigen::VectorXd w = objective_weights(mbar);
    if (X_.empty()) return 0.0;
    return cross_gram(kernel_, x, X_).dot(w);
}

Eigen::VectorXd Posterior::direction_variances(const Point& x) const {
    check_point(x);
    const double kxx = kernel_(x, x);
    Eigen::VectorXd out(rank());
    const Eigen::VectorXd k = X_.empty() ? Eigen::VectorXd() : cross_gram(kernel_, x, X_);
    for (const auto& g : groups_) {
        double v = g.eigval * kxx;
        if (!X_.empty()) {
            Eigen::VectorXd l = g.eigval * k;
            g.chol.triangularView<Eigen::Lower>().solveInPlace(l);
            v -= l.squaredNorm();
        }
        v = std::max(v, 0.0);
        for (auto d : g.dirs) out(d) = v;
    }
    return out;
}

double Posterior::variance_opnorm(const Point& x) const {
    if (rank() == 0) return 0.0;
    return direction_variances(x).maxCoeff();
}

double Posterior::log_det_recomputed() const {
    if (X_.empty()) return 0.0;
    const Eigen::MatrixXd G = gram(kernel_, X_);
    double total = 0.0;
    for (Eigen::Index j = 0; j < eigvals_.size(); ++j) {
        Eigen::MatrixXd A = (eigvals_(j) / hyper_.lambda) * G;
        A.diagonal().array() += 1.0;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        total += 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    }
    return total;
}

double theoretical_beta(const PosteriorHyperparams& h, double log_det) {
    const double info = 2.0 * std::log(1.0 / h.zeta) + log_det;
    return h.gamma + h.sigma / std::sqrt(h.lambda) * std::sqrt(std::max(0.0, info));
}

double Posterior::beta() const {
    if (hyper_.beta_override) return *hyper_.beta_override;
    return theoretical_beta(hyper_, log_det_);
}

Interval Posterior::confidence_interval(const Point& x, const Eigen::Ref<const Eigen::VectorXd>& mbar,
                                        double m_norm) const {
    const double center = objective_mean(x, mbar);
    const double half = beta() * m_norm * std::sqrt(variance_opnorm(x));
    return {center - half, center + half};
}

Posterior::Batch Posterior::evaluate(const Eigen::MatrixXd& candidates,
                                     const Eigen::Ref<const Eigen::VectorXd>& mbar,
                                     bool with_mean_coords) const {
    const Eigen::Index N = candidates.rows();
    if (N > 0 && candidates.cols() != kernel_.dim()) throw InputError("candidate dimension mismatch");
    Batch out;
    out.objective_mean = Eigen::VectorXd::Zero(N);
    out.opnorm = Eigen::VectorXd::Zero(N);
    if (with_mean_coords) out.mean_coords = Eigen::MatrixXd::Zero(N, rank());
    if (N == 0 || rank() == 0) return out;

    Eigen::VectorXd kxx(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        kxx(i) = kernel_(candidates.row(i).transpose(), candidates.row(i).transpose());
    }
    if (X_.empty()) {
        const double top = eigvals_.maxCoeff();
        out.opnorm = (top * kxx).cwiseMax(0.0);
        return out;
    }
    const Eigen::MatrixXd C = cross_gram_rows(kernel_, candidates, X_);  // N x t
    out.objective_mean = C * objective_weights(mbar);
    out.opnorm.setConstant(-1.0);
    for (const auto& g : groups_) {
        Eigen::MatrixXd S = g.eigval * C.transpose();  // t x N
        g.chol.triangularView<Eigen::Lower>().solveInPlace(S);
        const Eigen::VectorXd v = (g.eigval * kxx - S.colwise().squaredNorm().transpose()).cwiseMax(0.0);
        out.opnorm = out.opnorm.cwiseMax(v);
        if (with_mean_coords) {
            const Eigen::MatrixXd proj = C * g.alpha;  // N x |dirs|
            for (std::size_t i = 0; i < g.dirs.size(); ++i) {
                out.mean_coords.col(g.dirs[i]) = g.eigval * proj.col(static_cast<Eigen::Index>(i));
            }
        }
    }
    return out;
}

Eigen::VectorXd representer_oracle(const ScalarKernel& kernel, const PointList& X,
                                   const Eigen::MatrixXd& Ybar, const InducedSpectrum& spectrum,
                                   double lambda, const Point& x) {
    const Eigen::Index t = static_cast<Eigen::Index>(X.size());
    const Eigen::Index n = spectrum.rank();
    const Eigen::Index q = spectrum.measurement_dim();
    if (Ybar.rows() != t || Ybar.cols() != n) throw InputError("representer_oracle: Ybar must be t x n");
    if (t * q > 200) throw InputError("representer_oracle is limited to t*q <= 200");
    if (t == 0) return Eigen::VectorXd::Zero(n);

    // Truncated B_M in measurement coordinates.
    const Eigen::MatrixXd BM = spectrum.eigvecs * spectrum.eigvals.asDiagonal() * spectrum.eigvecs.transpose();
    Eigen::MatrixXd system(t * q, t * q);
    Eigen::VectorXd rhs(t * q);
    for (Eigen::Index i = 0; i < t; ++i) {
        rhs.segment(i * q, q) = spectrum.eigvecs * Ybar.row(i).transpose();
        for (Eigen::Index j = 0; j < t; ++j) {
            system.block(i * q, j * q, q, q) = kernel(X[i], X[j]) * BM;
        }
    }
    system.diagonal().array() += lambda;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw InternalError("representer system is singular");
    const Eigen::VectorXd a = lu.solve(rhs);

    Eigen::VectorXd mu = Eigen::VectorXd::Zero(q);
    for (Eigen::Index i = 0; i < t; ++i) mu += kernel(x, X[i]) * (BM * a.segment(i * q, q));
    return spectrum.eigvecs.transpose() * mu;
}

}  // namespace vvbo
