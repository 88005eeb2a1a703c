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

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "core/scalar_kernels.hpp"

namespace vvbo {

/// Discretized output space: a scalar RKHS over the trajectory index,
/// represented through the representers k(., t_j) on a fixed grid.
///
/// The grid Gram matrix K = V diag(L) V^T is eigendecomposed once.
/// Eigenvalues below eps_rel * max(L) are dropped, so the retained rank r may
/// be smaller than the grid size. Canonical coordinates c = L^{1/2} V^T a turn
/// the RKHS inner product a_u^T K a_v into a Euclidean dot product.
class OutputGrid {
public:
    OutputGrid(Eigen::VectorXd points, ScalarKernel kernel, double fit_reg = 0.01,
               double eps_rel = 1e-10);

    /// n equispaced points on [lo, hi]; each required point replaces its
    /// nearest grid point so evaluation functionals land on the grid exactly.
    static Eigen::VectorXd grid_points(double lo, double hi, int n,
                                       const std::vector<double>& required = {});

    [[nodiscard]] int size() const { return static_cast<int>(points_.size()); }
    [[nodiscard]] int rank() const { return static_cast<int>(eigvals_.size()); }
    [[nodiscard]] const Eigen::VectorXd& points() const { return points_; }
    [[nodiscard]] const ScalarKernel& kernel() const { return kernel_; }
    [[nodiscard]] double fit_reg() const { return fit_reg_; }
    [[nodiscard]] const Eigen::MatrixXd& gram() const { return gram_; }
    /// Retained eigenvalues, nonincreasing.
    [[nodiscard]] const Eigen::VectorXd& eigvals() const { return eigvals_; }
    /// Retained eigenvectors (size x rank), orthonormal columns.
    [[nodiscard]] const Eigen::MatrixXd& eigvecs() const { return eigvecs_; }
    /// rank x size map from representer coefficients to canonical coordinates.
    [[nodiscard]] const Eigen::MatrixXd& canonical_map() const { return canon_; }
    /// size x size: samples -> fitted coefficients, (K + fit_reg I)^{-1}.
    [[nodiscard]] const Eigen::MatrixXd& fit_operator() const { return fit_op_; }
    /// Trapezoid quadrature weights on the (possibly nonuniform) grid.
    [[nodiscard]] const Eigen::VectorXd& quadrature_weights() const { return quad_; }
    [[nodiscard]] std::optional<int> index_of(double t, double tol = 1e-9) const;

private:
    Eigen::VectorXd points_;
    ScalarKernel kernel_;
    double fit_reg_;
    Eigen::MatrixXd gram_;
    Eigen::VectorXd eigvals_;
    Eigen::MatrixXd eigvecs_;
    Eigen::MatrixXd canon_;
    Eigen::MatrixXd fit_op_;
    Eigen::VectorXd quad_;
};

using GridPtr = std::shared_ptr<const OutputGrid>;

/// Element sum_j coeffs_j k(., t_j) of the output space. Also used for
/// functional representers.
struct HilbertVector {
    Eigen::VectorXd coeffs;
    GridPtr grid;

    [[nodiscard]] Eigen::VectorXd canonical() const { return grid->canonical_map() * coeffs; }
    /// Values of the element at the grid points (K a).
    [[nodiscard]] Eigen::VectorXd values() const { return grid->gram() * coeffs; }
};

using Functional = HilbertVector;

HilbertVector zero_vector(const GridPtr& grid);
HilbertVector fit_from_samples(const GridPtr& grid, const Eigen::Ref<const Eigen::VectorXd>& samples);

double inner(const HilbertVector& u, const HilbertVector& v);
double inner_canonical(const HilbertVector& u, const HilbertVector& v);
double norm(const HilbertVector& u);

Functional point_eval_functional(const GridPtr& grid, double t0);
Functional integral_functional(const GridPtr& grid, const Eigen::Ref<const Eigen::VectorXd>& weights);
Functional combine_functionals(const std::vector<Functional>& basis,
                               const Eigen::Ref<const Eigen::VectorXd>& w);

HilbertVector operator+(const HilbertVector& a, const HilbertVector& b);
HilbertVector operator*(double s, const HilbertVector& a);

}  // namespace vvbo
