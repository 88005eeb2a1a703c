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

#include "core/scalar_kernels.hpp"

#include <cmath>

#include "core/error.hpp"

namespace vvbo {

ScalarKernel::ScalarKernel(KernelFamily family, Eigen::VectorXd length_scales,
                           double variance_scale, double nu)
    : family_(family),
      length_scales_(std::move(length_scales)),
      variance_(variance_scale),
      nu_(nu) {
    if (length_scales_.size() == 0) {
        throw InputError("kernel needs at least one length scale");
    }
    if ((length_scales_.array() <= 0.0).any() || !length_scales_.allFinite()) {
        throw InputError("kernel length scales must be positive and finite");
    }
    if (!(variance_ > 0.0) || !std::isfinite(variance_)) {
        throw InputError("kernel variance scale must be positive");
    }
    if (family_ == KernelFamily::Matern && nu_ != 1.5 && nu_ != 2.5) {
        throw InputError("Matern smoothness must be 1.5 or 2.5");
    }
    inv_length_scales_ = length_scales_.cwiseInverse();
}

double ScalarKernel::profile(double r2) const {
    switch (family_) {
        case KernelFamily::RBF:
            return variance_ * std::exp(-0.5 * r2);
        case KernelFamily::Matern: {
            const double r = std::sqrt(r2);
            if (nu_ == 1.5) {
                const double a = std::sqrt(3.0) * r;
                return variance_ * (1.0 + a) * std::exp(-a);
            }
            const double a = std::sqrt(5.0) * r;
            return variance_ * (1.0 + a + 5.0 * r2 / 3.0) * std::exp(-a);
        }
        case KernelFamily::Linear:
            break;
    }
    throw InternalError("profile() called on a non-stationary kernel");
}

double ScalarKernel::operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                                const Eigen::Ref<const Eigen::VectorXd>& s) const {
    if (x.size() != length_scales_.size() || s.size() != length_scales_.size()) {
        throw InputError("kernel_eval: point dimension " + std::to_string(x.size()) + "/" +
                         std::to_string(s.size()) + " does not match kernel dimension " +
                         std::to_string(length_scales_.size()));
    }
    if (family_ == KernelFamily::Linear) {
        return variance_ *
               (x.cwiseProduct(inv_length_scales_)).dot(s.cwiseProduct(inv_length_scales_));
    }
    const double r2 = ((x - s).cwiseProduct(inv_length_scales_)).squaredNorm();
    return profile(r2);
}

double kernel_eval(const ScalarKernel& k, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& s) {
    return k(x, s);
}

Eigen::MatrixXd gram(const ScalarKernel& k, const PointList& X) {
    const auto t = static_cast<Eigen::Index>(X.size());
    Eigen::MatrixXd G(t, t);
    for (Eigen::Index j = 0; j < t; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            G(i, j) = k(X[i], X[j]);
            G(j, i) = G(i, j);
        }
    }
    return G;
}

Eigen::VectorXd cross_gram(const ScalarKernel& k, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const PointList& X) {
    Eigen::VectorXd row(static_cast<Eigen::Index>(X.size()));
    for (std::size_t i = 0; i < X.size(); ++i) row(static_cast<Eigen::Index>(i)) = k(x, X[i]);
    return row;
}

Eigen::MatrixXd cross_gram_rows(const ScalarKernel& k, const Eigen::MatrixXd& candidates,
                                const PointList& X) {
    Eigen::MatrixXd C(candidates.rows(), static_cast<Eigen::Index>(X.size()));
    if (candidates.rows() > 0 && candidates.cols() != k.dim()) {
        throw InputError("cross_gram_rows: candidate dimension mismatch");
    }
    for (std::size_t j = 0; j < X.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
            C(i, jj) = k(candidates.row(i).transpose(), X[j]);
        }
    }
    return C;
}

std::vector<std::pair<int, int>> duplicate_pairs(const PointList& X, double tol) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t j = 0; j < X.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if ((X[i] - X[j]).lpNorm<Eigen::Infinity>() <= tol) {
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return out;
}

bool contains_point(const PointList& X, const Eigen::Ref<const Eigen::VectorXd>& x, double tol) {
    for (const auto& p : X) {
        if (p.size() == x.size() && (p - x).lpNorm<Eigen::Infinity>() <= tol) return true;
    }
    return false;
}

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "rbf" || name == "RBF" || name == "gaussian") return KernelFamily::RBF;
    if (name == "matern" || name == "Matern") return KernelFamily::Matern;
    if (name == "linear" || name == "Linear") return KernelFamily::Linear;
    throw InputError("unknown kernel family '" + std::string(name) + "'");
}

std::string kernel_family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::RBF: return "rbf";
        case KernelFamily::Matern: return "matern";
        case KernelFamily::Linear: return "linear";
    }
    return "unknown";
}

BoxDomain::BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() == 0 || lower.size() != upper.size()) {
        throw InputError("box domain bounds must be non-empty and of equal length");
    }
    if (!(lower.array() < upper.array()).all()) {
        throw InputError("box domain requires lower[i] < upper[i]");
    }
}

BoxDomain BoxDomain::interval(double lo, double hi) {
    return {Eigen::VectorXd::Constant(1, lo), Eigen::VectorXd::Constant(1, hi)};
}

BoxDomain BoxDomain::cube(double lo, double hi, int dim) {
    return {Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi)};
}

bool BoxDomain::contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) const {
    if (x.size() != lower.size()) return false;
    return ((x.array() >= lower.array() - tol) && (x.array() <= upper.array() + tol)).all();
}

Point BoxDomain::clip(Point x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
}

}  // namespace vvbo
