// Copyright 2026 The ErasureLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Reduced density operators and the entropic / distance functionals built on
 * them. All logarithms are base 2.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "erasurelab/errors.hpp"
#include "erasurelab/state.hpp"

namespace erasurelab {

inline constexpr double kOperatorTolerance = 1e-9;
/// Eigenvalues in [-kClampTolerance, 0) are treated as numerical zero.
inline constexpr double kClampTolerance = 1e-12;

using ComplexMatrix = Eigen::MatrixXcd;

class DensityOp {
public:
    DensityOp(std::vector<Label> labels, ComplexMatrix matrix)
        : labels_(std::move(labels)), matrix_(std::move(matrix)) {
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << labels_.size());
        if (matrix_.rows() != dim || matrix_.cols() != dim) {
            fail(ErrorCode::DimensionMismatch, "density matrix must be 2^(number of labels) square");
        }
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            for (std::size_t j = i + 1; j < labels_.size(); ++j) {
                if (labels_[i] == labels_[j]) {
                    fail(ErrorCode::DuplicateLabel, "label " + std::to_string(labels_[i].value));
                }
            }
        }
        if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kOperatorTolerance) {
            fail(ErrorCode::NonHermitian, "density matrix is not Hermitian");
        }
        if (std::abs(matrix_.trace() - std::complex<double>(1.0, 0.0)) > kOperatorTolerance) {
            fail(ErrorCode::NonUnitTrace, "trace " + std::to_string(matrix_.trace().real()));
        }
        if (eigenvalues().minCoeff() < -kOperatorTolerance) {
            fail(ErrorCode::NegativeEigenvalue, "density matrix is not positive semidefinite");
        }
    }

    static DensityOp projector(const LabeledState &s) {
        const auto dim = static_cast<Eigen::Index>(s.dimension());
        Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(), dim);
        return DensityOp(s.ids(), v * v.adjoint());
    }

    const std::vector<Label> &labels() const noexcept { return labels_; }
    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    std::size_t num_qubits() const noexcept { return labels_.size(); }
    Eigen::Index dim() const noexcept { return matrix_.rows(); }

    Eigen::VectorXd eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }

private:
    std::vector<Label> labels_;
    ComplexMatrix matrix_;
};

namespace detail {

inline void require_disjoint(std::span<const Label> a, std::span<const Label> b) {
    for (const Label x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end()) {
            fail(ErrorCode::OverlappingParts, "label " + std::to_string(x.value) + " appears in both parts");
        }
    }
}

inline std::vector<Label> join(std::span<const Label> a, std::span<const Label> b) {
    std::vector<Label> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline std::vector<Label> complement(const std::vector<Label> &all, std::span<const Label> part) {
    std::vector<Label> out;
    for (const Label x : all) {
        if (std::find(part.begin(), part.end(), x) == part.end()) {
            out.push_back(x);
        }
    }
    return out;
}

inline double clamped(double lambda) {
    if (lambda < -kClampTolerance) {
        fail(ErrorCode::NegativeEigenvalue, "eigenvalue " + std::to_string(lambda));
    }
    return std::max(lambda, 0.0);
}

/// Positions of `keep` inside `all` (MSB-first), throwing on unknown labels.
inline std::vector<std::size_t> positions_of(const std::vector<Label> &all, std::span<const Label> keep) {
    std::vector<std::size_t> out;
    for (const Label k : keep) {
        const auto it = std::find(all.begin(), all.end(), k);
        if (it == all.end()) {
            fail(ErrorCode::UnknownLabel, "label " + std::to_string(k.value));
        }
        const auto pos = static_cast<std::size_t>(it - all.begin());
        if (std::find(out.begin(), out.end(), pos) != out.end()) {
            fail(ErrorCode::DuplicateLabel, "label " + std::to_string(k.value) + " listed twice");
        }
        out.push_back(pos);
    }
    return out;
}

inline std::size_t gather(std::size_t idx, std::size_t n, const std::vector<std::size_t> &positions) {
    std::size_t out = 0;
    for (const std::size_t pos : positions) {
        out = (out << 1) | ((idx >> (n - 1 - pos)) & 1u);
    }
    return out;
}

} // namespace detail

/// Reduced state on `keep`, in the order given.
inline DensityOp partial_trace(const LabeledState &s, std::span<const Label> keep) {
    const std::size_t n = s.num_qubits();
    const std::vector<Label> all = s.ids();
    const auto keep_pos = detail::positions_of(all, keep);
    std::vector<std::size_t> rest_pos;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(keep_pos.begin(), keep_pos.end(), i) == keep_pos.end()) {
            rest_pos.push_back(i);
        }
    }
    const auto rows = static_cast<Eigen::Index>(std::size_t{1} << keep_pos.size());
    const auto cols = static_cast<Eigen::Index>(std::size_t{1} << rest_pos.size());
    ComplexMatrix psi(rows, cols);
    for (std::size_t idx = 0; idx < s.dimension(); ++idx) {
        psi(static_cast<Eigen::Index>(detail::gather(idx, n, keep_pos)),
            static_cast<Eigen::Index>(detail::gather(idx, n, rest_pos))) = s.amplitudes()[idx];
    }
    ComplexMatrix rho = psi * psi.adjoint();
    // Exact Hermiticity; the product is Hermitian only up to rounding.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityOp(std::vector<Label>(keep.begin(), keep.end()), std::move(rho));
}

inline DensityOp partial_trace(const LabeledState &s, std::initializer_list<Label> keep) {
    return partial_trace(s, std::span<const Label>(keep.begin(), keep.size()));
}

inline DensityOp partial_trace(const DensityOp &rho, std::span<const Label> keep) {
    const std::size_t n = rho.num_qubits();
    const auto keep_pos = detail::positions_of(rho.labels(), keep);
    std::vector<std::size_t> rest_pos;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(keep_pos.begin(), keep_pos.end(), i) == keep_pos.end()) {
            rest_pos.push_back(i);
        }
    }
    const auto kdim = static_cast<Eigen::Index>(std::size_t{1} << keep_pos.size());
    ComplexMatrix out = ComplexMatrix::Zero(kdim, kdim);
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (detail::gather(i, n, rest_pos) != detail::gather(j, n, rest_pos)) {
                continue;
            }
            out(static_cast<Eigen::Index>(detail::gather(i, n, keep_pos)),
                static_cast<Eigen::Index>(detail::gather(j, n, keep_pos))) +=
                rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityOp(std::vector<Label>(keep.begin(), keep.end()), std::move(out));
}

/// Same operator with labels renamed positionally (from[i] -> to[i]).
inline DensityOp relabel(const DensityOp &rho, std::span<const Label> from, std::span<const Label> to) {
    if (from.size() != to.size()) {
        fail(ErrorCode::InvalidArgument, "relabel needs equal-length label lists");
    }
    std::vector<Label> labels = rho.labels();
    for (auto &l : labels) {
        for (std::size_t i = 0; i < from.size(); ++i) {
            if (l == from[i]) {
                l = to[i];
                break;
            }
        }
    }
    return DensityOp(std::move(labels), rho.matrix());
}

/// Same operator expressed in a permuted label order.
inline DensityOp reorder(const DensityOp &rho, std::span<const Label> order) {
    const auto pos = detail::positions_of(rho.labels(), order);
    if (pos.size() != rho.num_qubits()) {
        fail(ErrorCode::LabelMismatch, "reorder needs every label exactly once");
    }
    const std::size_t n = rho.num_qubits();
    const std::size_t dim = std::size_t{1} << n;
    // new index -> old index
    std::vector<Eigen::Index> map(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::size_t old_idx = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (idx & (std::size_t{1} << (n - 1 - j))) {
                old_idx |= std::size_t{1} << (n - 1 - pos[j]);
            }
        }
        map[idx] = static_cast<Eigen::Index>(old_idx);
    }
    ComplexMatrix m(rho.dim(), rho.dim());
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho.matrix()(map[i], map[j]);
        }
    }
    return DensityOp(std::vector<Label>(order.begin(), order.end()), std::move(m));
}

/// Von Neumann entropy in bits, 0 log 0 = 0.
inline double entropy(const DensityOp &rho) {
    double h = 0.0;
    const Eigen::VectorXd ev = rho.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double lambda = detail::clamped(ev(i));
        if (lambda > 0.0) {
            h -= lambda * std::log2(lambda);
        }
    }
    return std::max(h, 0.0);
}

/// H of the marginal on `part`. For pure states the smaller side of the cut is
/// diagonalized, since H(part) = H(complement).
inline double entropy_of(const LabeledState &s, std::span<const Label> part) {
    if (part.empty()) {
        return 0.0;
    }
    detail::positions_of(s.ids(), part);
    const std::vector<Label> rest = detail::complement(s.ids(), part);
    if (rest.empty()) {
        return 0.0;
    }
    if (rest.size() < part.size()) {
        return entropy(partial_trace(s, rest));
    }
    return entropy(partial_trace(s, part));
}

inline double entropy_of(const DensityOp &rho, std::span<const Label> part) {
    if (part.empty()) {
        return 0.0;
    }
    return entropy(partial_trace(rho, part));
}

/// I(A;B) = H(A) + H(B) - H(AB).
template <typename StateLike>
double mutual_information(const StateLike &s, std::span<const Label> a, std::span<const Label> b) {
    detail::require_disjoint(a, b);
    const auto ab = detail::join(a, b);
    return entropy_of(s, a) + entropy_of(s, b) - entropy_of(s, ab);
}

template <typename StateLike>
double mutual_information(const StateLike &s, std::initializer_list<Label> a, std::initializer_list<Label> b) {
    return mutual_information(s, std::span<const Label>(a.begin(), a.size()), std::span<const Label>(b.begin(), b.size()));
}

/// I(A>B) = H(B) - H(AB).
template <typename StateLike>
double coherent_information(const StateLike &s, std::span<const Label> a, std::span<const Label> b) {
    detail::require_disjoint(a, b);
    const auto ab = detail::join(a, b);
    return entropy_of(s, b) - entropy_of(s, ab);
}

template <typename StateLike>
double coherent_information(const StateLike &s, std::initializer_list<Label> a, std::initializer_list<Label> b) {
    return coherent_information(s, std::span<const Label>(a.begin(), a.size()), std::span<const Label>(b.begin(), b.size()));
}

namespace detail {

/// Brings sigma into rho's label order; both must cover the same labels.
inline ComplexMatrix aligned(const DensityOp &rho, const DensityOp &sigma) {
    if (rho.dim() != sigma.dim()) {
        fail(ErrorCode::DimensionMismatch, "operators act on spaces of different dimension");
    }
    for (const Label l : rho.labels()) {
        if (std::find(sigma.labels().begin(), sigma.labels().end(), l) == sigma.labels().end()) {
            fail(ErrorCode::LabelMismatch, "label " + std::to_string(l.value) + " missing from second operator");
        }
    }
    if (rho.labels() == sigma.labels()) {
        return sigma.matrix();
    }
    return reorder(sigma, rho.labels()).matrix();
}

/// Square root of a PSD matrix. Eigenvalues at rounding level are zeroed
/// first; their roots (~1e-8) would otherwise swamp the result.
inline ComplexMatrix psd_sqrt(const ComplexMatrix &m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    Eigen::VectorXd roots = solver.eigenvalues();
    const double floor = 1e-14 * std::max(1.0, roots.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        roots(i) = roots(i) > floor ? std::sqrt(roots(i)) : 0.0;
    }
    return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

} // namespace detail

/// F(rho, sigma) = tr sqrt(rho^{1/2} sigma rho^{1/2}) = ||rho^{1/2} sigma^{1/2}||_1.
inline double fidelity(const DensityOp &rho, const DensityOp &sigma) {
    const ComplexMatrix s = detail::aligned(rho, sigma);
    const ComplexMatrix product = detail::psd_sqrt(rho.matrix()) * detail::psd_sqrt(s);
    Eigen::JacobiSVD<ComplexMatrix> svd(product);
    return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

/// D(rho, sigma) = (1/2) ||rho - sigma||_1.
inline double trace_distance(const DensityOp &rho, const DensityOp &sigma) {
    const ComplexMatrix diff = rho.matrix() - detail::aligned(rho, sigma);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(diff, Eigen::EigenvaluesOnly);
    return std::clamp(0.5 * solver.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

/// sqrt(<psi| rho |psi>): fidelity of a pure target with a mixed state.
inline double fidelity_with_pure(const DensityOp &rho, const LabeledState &target) {
    const LabeledState t = reorder(target, rho.labels());
    const auto dim = static_cast<Eigen::Index>(t.dimension());
    Eigen::Map<const Eigen::VectorXcd> v(t.amplitudes().data(), dim);
    const double overlap = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    return std::clamp(std::sqrt(std::max(overlap, 0.0)), 0.0, 1.0);
}

} // namespace erasurelab
