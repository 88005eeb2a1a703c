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

#include "core/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "core/error.hpp"

namespace vvbo {

MeasurementOperator::MeasurementOperator(MeasurementKind kind, GridPtr grid,
                                         std::vector<Functional> functionals, Eigen::MatrixXd matrix)
    : kind_(kind), grid_(std::move(grid)), functionals_(std::move(functionals)), matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0) {
        rank_ = 0;
        return;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
    const auto& s = svd.singularValues();
    const double tol = std::max(matrix_.rows(), matrix_.cols()) * 1e-12 * (s.size() ? s(0) : 0.0);
    rank_ = static_cast<int>((s.array() > tol).count());
}

MeasurementOperator MeasurementOperator::identity(const GridPtr& grid) {
    const int r = grid->rank();
    return {MeasurementKind::Identity, grid, {}, Eigen::MatrixXd::Identity(r, r)};
}

MeasurementOperator MeasurementOperator::projection(std::vector<Functional> functionals) {
    if (functionals.empty()) throw InputError("projection needs at least one functional");
    const GridPtr grid = functionals.front().grid;
    Eigen::MatrixXd A(static_cast<Eigen::Index>(functionals.size()), grid->rank());
    for (std::size_t i = 0; i < functionals.size(); ++i) {
        if (functionals[i].grid != grid) throw InputError("projection functionals must share a grid");
        A.row(static_cast<Eigen::Index>(i)) = functionals[i].canonical().transpose();
    }
    const auto kind = functionals.size() == 1 ? MeasurementKind::ScalarFunctional
                                              : MeasurementKind::Projection;
    return {kind, grid, std::move(functionals), std::move(A)};
}

MeasurementOperator MeasurementOperator::scalar(const Functional& xi) {
    return projection({xi});
}

InducedSpectrum spectrum_of(const Eigen::MatrixXd& BM, TruncationPolicy policy) {
    const Eigen::Index q = BM.rows();
    if (BM.cols() != q) throw InputError("induced operator must be square");
    InducedSpectrum out;
    out.policy = policy;
    out.induced = BM;
    out.full_trace = BM.trace();
    if (q == 0) return out;

    Eigen::VectorXd vals;
    Eigen::MatrixXd vecs;
    const bool diagonal = (BM - Eigen::MatrixXd(BM.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    if (diagonal) {
        vals = BM.diagonal();
        vecs = Eigen::MatrixXd::Identity(q, q);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(BM);
        if (es.info() != Eigen::Success) throw InternalError("induced operator eigensolve failed");
        vals = es.eigenvalues();
        vecs = es.eigenvectors();
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(q));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return vals(a) > vals(b); });

    const double top = vals(order.front());
    const double scale = std::max(std::abs(top), BM.cwiseAbs().maxCoeff());
    if (vals(order.back()) < -1e-8 * scale) {
        throw InputError("induced operator is not positive semidefinite");
    }
    if (!(top > 0.0)) return out;

    // Directions at round-off level carry no information and are always dropped.
    const double floor = 1e-14 * top;
    Eigen::Index keep = 0;
    if (policy.kind == TruncationPolicy::Kind::FixedRank) {
        if (policy.value < 1) throw InputError("fixed_rank truncation needs n >= 1");
        keep = std::min<Eigen::Index>(q, static_cast<Eigen::Index>(policy.value));
    } else {
        if (!(policy.value > 0.0 && policy.value <= 1.0)) {
            throw InputError("energy_fraction truncation needs 0 < rho <= 1");
        }
        double total = 0.0;
        for (auto i : order) total += std::max(0.0, vals(i));
        double acc = 0.0;
        for (auto i : order) {
            ++keep;
            acc += std::max(0.0, vals(i));
            if (acc >= policy.value * total) break;
        }
    }
    while (keep > 0 && vals(order[static_cast<std::size_t>(keep - 1)]) <= floor) --keep;

    out.eigvals.resize(keep);
    out.eigvecs.resize(q, keep);
    for (Eigen::Index k = 0; k < keep; ++k) {
        out.eigvals(k) = vals(order[static_cast<std::size_t>(k)]);
        out.eigvecs.col(k) = vecs.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

InducedSpectrum induced_operator(const MeasurementOperator& M, const Eigen::MatrixXd& B,
                                 TruncationPolicy policy) {
    const auto& A = M.matrix_canon();
    if (B.rows() != A.cols() || B.cols() != A.cols()) {
        throw InputError("induced_operator: B must be " + std::to_string(A.cols()) + "x" +
                         std::to_string(A.cols()) + " in canonical output coordinates");
    }
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, B.cwiseAbs().maxCoeff())) {
        throw InputError("induced_operator: B must be symmetric");
    }
    if (B.rows() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
        const double bnorm = es.eigenvalues().cwiseAbs().maxCoeff();
        if (es.eigenvalues().minCoeff() < -1e-8 * bnorm) {
            throw InputError("induced_operator: B is not positive semidefinite");
        }
    }
    Eigen::MatrixXd BM = A * B * A.transpose();
    BM = 0.5 * (BM + BM.transpose()).eval();
    return spectrum_of(BM, policy);
}

Eigen::VectorXd measure_canonical(const MeasurementOperator& M,
                                  const Eigen::Ref<const Eigen::VectorXd>& canonical) {
    if (canonical.size() != M.matrix_canon().cols()) {
        throw InputError("measure: canonical coordinate length mismatch");
    }
    if (M.kind() == MeasurementKind::Identity) return canonical;
    return M.matrix_canon() * canonical;
}

Eigen::VectorXd measure(const MeasurementOperator& M, const HilbertVector& u) {
    if (u.grid != M.grid()) throw InputError("measure: vector lives on a different grid");
    return measure_canonical(M, u.canonical());
}

FunctionalCoords functional_coords(const InducedSpectrum& spectrum,
                                   const Eigen::Ref<const Eigen::VectorXd>& m_meas) {
    if (m_meas.size() != spectrum.measurement_dim()) {
        throw InputError("functional_coords: functional has " + std::to_string(m_meas.size()) +
                         " measurement coordinates, spectrum expects " +
                         std::to_string(spectrum.measurement_dim()));
    }
    FunctionalCoords out;
    out.mbar = spectrum.to_basis(m_meas);
    out.m_norm = m_meas.norm();
    const double full = m_meas.squaredNorm();
    out.retained_fraction = full > 0.0 ? out.mbar.squaredNorm() / full : 1.0;
    const double rho = spectrum.policy.kind == TruncationPolicy::Kind::EnergyFraction
                           ? spectrum.policy.value
                           : 1.0 - 1e-10;
    if (full > 0.0 && out.retained_fraction < rho - 1e-12) {
        out.truncation_warning = true;
        out.warning = "spectral truncation discards " +
                      std::to_string(100.0 * (1.0 - out.retained_fraction)) +
                      "% of the objective functional's squared norm";
    }
    return out;
}

FunctionalCoords functional_coords(const MeasurementOperator& M, const Functional& m,
                                   const InducedSpectrum& spectrum) {
    if (M.kind() != MeasurementKind::Identity) {
        throw InputError("functional_coords: output-space functionals need M = Identity; "
                         "pass the weight vector for projections");
    }
    if (m.grid != M.grid()) throw InputError("functional_coords: functional lives on a different grid");
    return functional_coords(spectrum, m.canonical());
}

FunctionalCoords functional_coords(const MeasurementOperator& M,
                                   const Eigen::Ref<const Eigen::VectorXd>& w,
                                   const InducedSpectrum& spectrum) {
    if (w.size() != M.dim()) throw InputError("functional_coords: weight length mismatch");
    return functional_coords(spectrum, w);
}

HilbertVector from_canonical(const GridPtr& grid, const Eigen::Ref<const Eigen::VectorXd>& c) {
    if (c.size() != grid->rank()) throw InputError("from_canonical: coordinate length mismatch");
    // a = V L^{-1/2} c reproduces c exactly on the retained directions.
    Eigen::VectorXd a = grid->eigvecs() * c.cwiseQuotient(grid->eigvals().cwiseSqrt());
    return {std::move(a), grid};
}

HilbertVector adjoint_lift(const MeasurementOperator& M, const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() != M.dim()) throw InputError("adjoint_lift: dimension mismatch");
    if (M.kind() == MeasurementKind::Identity) return from_canonical(M.grid(), v);
    HilbertVector out = zero_vector(M.grid());
    for (std::size_t i = 0; i < M.functionals().size(); ++i) {
        out.coeffs += v(static_cast<Eigen::Index>(i)) * M.functionals()[i].coeffs;
    }
    return out;
}

}  // namespace vvbo
