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
#include <vector>

#include <Eigen/Core>

#include "core/hilbert_rep.hpp"

namespace vvbo {

enum class MeasurementKind { Identity, Projection, ScalarFunctional };

/// Bounded linear map from the output space to the measurement space,
/// stored as a matrix acting on canonical output coordinates.
class MeasurementOperator {
public:
    static MeasurementOperator identity(const GridPtr& grid);
    static MeasurementOperator projection(std::vector<Functional> functionals);
    static MeasurementOperator scalar(const Functional& xi);

    [[nodiscard]] MeasurementKind kind() const { return kind_; }
    [[nodiscard]] const GridPtr& grid() const { return grid_; }
    [[nodiscard]] const std::vector<Functional>& functionals() const { return functionals_; }
    /// q x r, canonical output coordinates -> measurement coordinates.
    [[nodiscard]] const Eigen::MatrixXd& matrix_canon() const { return matrix_; }
    [[nodiscard]] int dim() const { return static_cast<int>(matrix_.rows()); }
    [[nodiscard]] int numerical_rank() const { return rank_; }
    [[nodiscard]] bool rank_deficient() const { return rank_ < matrix_.rows(); }

private:
    MeasurementOperator(MeasurementKind kind, GridPtr grid, std::vector<Functional> functionals,
                        Eigen::MatrixXd matrix);

    MeasurementKind kind_;
    GridPtr grid_;
    std::vector<Functional> functionals_;
    Eigen::MatrixXd matrix_;
    int rank_ = 0;
};

struct TruncationPolicy {
    enum class Kind { FixedRank, EnergyFraction };
    Kind kind = Kind::EnergyFraction;
    double value = 1.0 - 1e-10;

    static TruncationPolicy fixed_rank(int n) { return {Kind::FixedRank, static_cast<double>(n)}; }
    static TruncationPolicy energy_fraction(double rho) { return {Kind::EnergyFraction, rho}; }
};

/// Truncated eigendecomposition of B_M = A B A^T in measurement coordinates.
struct InducedSpectrum {
    Eigen::VectorXd eigvals;   // nonincreasing, positive
    Eigen::MatrixXd eigvecs;   // q x n, orthonormal columns
    TruncationPolicy policy;
    double full_trace = 0.0;   // trace(B_M) before truncation
    Eigen::MatrixXd induced;   // B_M itself (q x q)

    [[nodiscard]] int rank() const { return static_cast<int>(eigvals.size()); }
    [[nodiscard]] int measurement_dim() const { return static_cast<int>(eigvecs.rows()); }
    /// Measurement coordinates -> coordinates in the retained eigenbasis.
    [[nodiscard]] Eigen::VectorXd to_basis(const Eigen::Ref<const Eigen::VectorXd>& v) const {
        return eigvecs.transpose() * v;
    }
    [[nodiscard]] Eigen::VectorXd from_basis(const Eigen::Ref<const Eigen::VectorXd>& c) const {
        return eigvecs * c;
    }
};

/// B is given in canonical output coordinates (r x r, symmetric PSD).
InducedSpectrum induced_operator(const MeasurementOperator& M, const Eigen::MatrixXd& B,
                                 TruncationPolicy policy = {});

/// Spectrum of an explicit symmetric PSD matrix (already in measurement
/// coordinates).
InducedSpectrum spectrum_of(const Eigen::MatrixXd& BM, TruncationPolicy policy = {});

Eigen::VectorXd measure(const MeasurementOperator& M, const HilbertVector& u);
/// Same as measure() but starting from canonical coordinates.
Eigen::VectorXd measure_canonical(const MeasurementOperator& M,
                                  const Eigen::Ref<const Eigen::VectorXd>& canonical);

struct FunctionalCoords {
    Eigen::VectorXd mbar;
    double m_norm = 0.0;
    double retained_fraction = 1.0;  // ||mbar||^2 / ||m_meas||^2
    bool truncation_warning = false;
    std::string warning;
};

/// Coordinates of a functional already expressed in measurement coordinates.
FunctionalCoords functional_coords(const InducedSpectrum& spectrum,
                                   const Eigen::Ref<const Eigen::VectorXd>& m_meas);
/// Output-space functional m (requires M = Identity).
FunctionalCoords functional_coords(const MeasurementOperator& M, const Functional& m,
                                   const InducedSpectrum& spectrum);
/// Weight vector w in R^q (Projection / ScalarFunctional).
FunctionalCoords functional_coords(const MeasurementOperator& M,
                                   const Eigen::Ref<const Eigen::VectorXd>& w,
                                   const InducedSpectrum& spectrum);

/// M^* v as an output-space element.
HilbertVector adjoint_lift(const MeasurementOperator& M, const Eigen::Ref<const Eigen::VectorXd>& v);

/// Output-space element whose canonical coordinates are `c`.
HilbertVector from_canonical(const GridPtr& grid, const Eigen::Ref<const Eigen::VectorXd>& c);

}  // namespace vvbo
