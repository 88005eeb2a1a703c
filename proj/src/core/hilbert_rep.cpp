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

#include "core/hilbert_rep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "core/error.hpp"

namespace vvbo {

namespace {

void require_same_grid(const HilbertVector& u, const HilbertVector& v) {
    if (!u.grid || u.grid != v.grid) throw InputError("output vectors live on different grids");
}

}  // namespace

OutputGrid::OutputGrid(Eigen::VectorXd points, ScalarKernel kernel, double fit_reg, double eps_rel)
    : points_(std::move(points)), kernel_(std::move(kernel)), fit_reg_(fit_reg) {
    const Eigen::Index n = points_.size();
    if (n == 0) throw InputError("output grid must contain at least one point");
    if (kernel_.dim() != 1) throw InputError("output kernel must be one-dimensional");
    if (!(fit_reg_ > 0.0)) throw InputError("fit regularizer must be positive");
    for (Eigen::Index i = 1; i < n; ++i) {
        if (!(points_(i) > points_(i - 1))) {
            throw InputError("output grid points must be strictly increasing");
        }
    }

    gram_.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            gram_(i, j) = kernel_(points_.segment(i, 1), points_.segment(j, 1));
            gram_(j, i) = gram_(i, j);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_);
    if (es.info() != Eigen::Success) throw InternalError("grid Gram eigendecomposition failed");
    // Eigen returns ascending order; keep the leading block in descending order.
    const double top = es.eigenvalues()(n - 1);
    const double cutoff = eps_rel * top;
    Eigen::Index kept = 0;
    for (Eigen::Index i = n - 1; i >= 0 && es.eigenvalues()(i) >= cutoff; --i) ++kept;
    eigvals_.resize(kept);
    eigvecs_.resize(n, kept);
    for (Eigen::Index k = 0; k < kept; ++k) {
        eigvals_(k) = es.eigenvalues()(n - 1 - k);
        eigvecs_.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    canon_ = eigvals_.cwiseSqrt().asDiagonal() * eigvecs_.transpose();

    Eigen::MatrixXd reg = gram_;
    reg.diagonal().array() += fit_reg_;
    fit_op_ = reg.llt().solve(Eigen::MatrixXd::Identity(n, n));
    fit_op_ = 0.5 * (fit_op_ + fit_op_.transpose()).eval();

    quad_ = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 1; i < n; ++i) {
        const double h = points_(i) - points_(i - 1);
        quad_(i - 1) += 0.5 * h;
        quad_(i) += 0.5 * h;
    }
}

Eigen::VectorXd OutputGrid::grid_points(double lo, double hi, int n,
                                        const std::vector<double>& required) {
    if (n < 1) throw InputError("grid needs at least one point");
    if (n > 1 && !(lo < hi)) throw InputError("grid interval must satisfy lo < hi");
    Eigen::VectorXd t = Eigen::VectorXd::Constant(1, lo);
    if (n > 1) t = Eigen::VectorXd::LinSpaced(n, lo, hi);
    std::vector<bool> pinned(static_cast<std::size_t>(n), false);
    for (double p : required) {
        if (p < lo - 1e-12 || p > hi + 1e-12) {
            throw InputError("required grid point " + std::to_string(p) + " lies outside [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        Eigen::Index best = 0;
        (t.array() - p).abs().minCoeff(&best);
        if (pinned[static_cast<std::size_t>(best)] && t(best) != p) {
            throw InputError("two required grid points map to the same grid cell; increase n_grid");
        }
        t(best) = p;
        pinned[static_cast<std::size_t>(best)] = true;
    }
    for (Eigen::Index i = 1; i < t.size(); ++i) {
        if (!(t(i) > t(i - 1))) throw InputError("required grid points break grid ordering");
    }
    return t;
}

std::optional<int> OutputGrid::index_of(double t, double tol) const {
    for (Eigen::Index i = 0; i < points_.size(); ++i) {
        if (std::abs(points_(i) - t) <= tol) return static_cast<int>(i);
    }
    return std::nullopt;
}

HilbertVector zero_vector(const GridPtr& grid) {
    return {Eigen::VectorXd::Zero(grid->size()), grid};
}

HilbertVector fit_from_samples(const GridPtr& grid, const Eigen::Ref<const Eigen::VectorXd>& samples) {
    if (samples.size() != grid->size()) {
        throw InputError("fit_from_samples: expected " + std::to_string(grid->size()) +
                         " samples, got " + std::to_string(samples.size()));
    }
    if (!samples.allFinite()) throw InputError("fit_from_samples: non-finite sample");
    return {grid->fit_operator() * samples, grid};
}

double inner(const HilbertVector& u, const HilbertVector& v) {
    require_same_grid(u, v);
    return u.coeffs.dot(u.grid->gram() * v.coeffs);
}

double inner_canonical(const HilbertVector& u, const HilbertVector& v) {
    require_same_grid(u, v);
    return u.canonical().dot(v.canonical());
}

double norm(const HilbertVector& u) {
    return std::sqrt(std::max(0.0, inner(u, u)));
}

Functional point_eval_functional(const GridPtr& grid, double t0) {
    const auto idx = grid->index_of(t0);
    if (!idx) {
        throw InputError("point evaluation at t=" + std::to_string(t0) + " is not on the output grid");
    }
    Functional f = zero_vector(grid);
    f.coeffs(*idx) = 1.0;
    return f;
}

Functional integral_functional(const GridPtr& grid, const Eigen::Ref<const Eigen::VectorXd>& weights) {
    if (weights.size() != grid->size()) {
        throw InputError("integral_functional: weight curve must have one value per grid point");
    }
    if (!weights.allFinite()) throw InputError("integral_functional: non-finite weight");
    return {weights.cwiseProduct(grid->quadrature_weights()), grid};
}

Functional combine_functionals(const std::vector<Functional>& basis,
                               const Eigen::Ref<const Eigen::VectorXd>& w) {
    if (basis.empty()) throw InputError("combine_functionals: empty basis");
    if (static_cast<Eigen::Index>(basis.size()) != w.size()) {
        throw InputError("combine_functionals: weight length does not match basis size");
    }
    Functional m = zero_vector(basis.front().grid);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        require_same_grid(m, basis[j]);
        m.coeffs += w(static_cast<Eigen::Index>(j)) * basis[j].coeffs;
    }
    return m;
}

HilbertVector operator+(const HilbertVector& a, const HilbertVector& b) {
    require_same_grid(a, b);
    return {a.coeffs + b.coeffs, a.grid};
}

HilbertVector operator*(double s, const HilbertVector& a) {
    return {s * a.coeffs, a.grid};
}

}  // namespace vvbo
