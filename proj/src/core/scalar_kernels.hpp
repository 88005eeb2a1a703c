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

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace vvbo {

using Point = Eigen::VectorXd;
using PointList = std::vector<Point>;

enum class KernelFamily { RBF, Matern, Linear };

/// Scalar positive-definite kernel on R^d with anisotropic length scales.
///
/// The distance is r^2 = sum_i ((x_i - s_i) / l_i)^2. RBF is exp(-r^2/2),
/// Matern uses the closed forms for nu = 1.5 and nu = 2.5, and Linear is the
/// scaled dot product sum_i x_i s_i / l_i^2. All families are multiplied by
/// variance_scale.
class ScalarKernel {
public:
    ScalarKernel(KernelFamily family, Eigen::VectorXd length_scales,
                 double variance_scale = 1.0, double nu = 2.5);

    static ScalarKernel rbf(Eigen::VectorXd length_scales, double variance_scale = 1.0) {
        return ScalarKernel(KernelFamily::RBF, std::move(length_scales), variance_scale);
    }
    static ScalarKernel isotropic(KernelFamily family, double length_scale, int dim,
                                  double variance_scale = 1.0, double nu = 2.5) {
        return ScalarKernel(family, Eigen::VectorXd::Constant(dim, length_scale),
                            variance_scale, nu);
    }

    [[nodiscard]] KernelFamily family() const { return family_; }
    [[nodiscard]] double nu() const { return nu_; }
    [[nodiscard]] double variance_scale() const { return variance_; }
    [[nodiscard]] const Eigen::VectorXd& length_scales() const { return length_scales_; }
    [[nodiscard]] int dim() const { return static_cast<int>(length_scales_.size()); }

    [[nodiscard]] double operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                                    const Eigen::Ref<const Eigen::VectorXd>& s) const;

    /// Kernel value as a function of the scaled distance r (stationary families only).
    [[nodiscard]] double profile(double r_squared) const;

private:
    KernelFamily family_;
    Eigen::VectorXd length_scales_;
    Eigen::VectorXd inv_length_scales_;
    double variance_;
    double nu_;
};

double kernel_eval(const ScalarKernel& k, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& s);

/// Symmetric Gram matrix; the upper triangle is mirrored so the result is
/// bitwise symmetric.
Eigen::MatrixXd gram(const ScalarKernel& k, const PointList& X);

/// Row vector G_{xX} returned as a column of length |X|.
Eigen::VectorXd cross_gram(const ScalarKernel& k, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const PointList& X);

/// Cross Gram between the rows of `candidates` and the points of X
/// (rows = candidates, cols = X).
Eigen::MatrixXd cross_gram_rows(const ScalarKernel& k, const Eigen::MatrixXd& candidates,
                                const PointList& X);

/// Index pairs (i < j) of points that coincide within `tol` in max-norm.
std::vector<std::pair<int, int>> duplicate_pairs(const PointList& X, double tol = 1e-12);

/// True if `x` coincides with any point of X within `tol` in max-norm.
bool contains_point(const PointList& X, const Eigen::Ref<const Eigen::VectorXd>& x,
                    double tol = 1e-12);

KernelFamily parse_kernel_family(std::string_view name);
std::string kernel_family_name(KernelFamily family);

/// Axis-aligned box lower <= x <= upper.
struct BoxDomain {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi);
    static BoxDomain interval(double lo, double hi);
    static BoxDomain cube(double lo, double hi, int dim);

    [[nodiscard]] int dim() const { return static_cast<int>(lower.size()); }
    [[nodiscard]] bool contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 0.0) const;
    [[nodiscard]] Point clip(Point x) const;
};

}  // namespace vvbo
