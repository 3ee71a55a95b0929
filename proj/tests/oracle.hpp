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

// Slow, direct reference computations used to check the library. Nothing here
// calls into the library's gate, trace or entropy code: gates are full
// 2^n x 2^n Kronecker products and partial traces are explicit index sums.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "erasurelab/state.hpp"

namespace oracle {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

inline const double kH = 1.0 / std::sqrt(2.0);

inline Vec amplitudes(const erasurelab::LabeledState &s) {
    Vec v(static_cast<Eigen::Index>(s.dimension()));
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s.amplitude(i);
    }
    return v;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Mat identity(Eigen::Index d) { return Mat::Identity(d, d); }

inline Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Mat hadamard() {
    Mat m(2, 2);
    m << kH, kH, kH, -kH;
    return m;
}

/// |a><b| on one qubit.
inline Mat ket_bra(int a, int b) {
    Mat m = Mat::Zero(2, 2);
    m(a, b) = 1.0;
    return m;
}

/// Places one-qubit operators on an n-qubit register, qubit 0 leftmost.
inline Mat embed(std::size_t n, const std::vector<std::pair<std::size_t, Mat>> &ops) {
    Mat out = identity(1);
    for (std::size_t q = 0; q < n; ++q) {
        Mat factor = identity(2);
        for (const auto &[pos, op] : ops) {
            if (pos == q) {
                factor = op;
            }
        }
        out = kron(out, factor);
    }
    return out;
}

/// Full matrix of a 4x4 local operator acting on qubits (q1, q2), q1 being the
/// more significant bit of the local index.
inline Mat embed_pair(std::size_t n, std::size_t q1, std::size_t q2, const Mat &local) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Mat out = Mat::Zero(dim, dim);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (local(r, c) == cd(0.0)) {
                continue;
            }
            out += local(r, c) * embed(n, {{q1, ket_bra(r >> 1, c >> 1)}, {q2, ket_bra(r & 1, c & 1)}});
        }
    }
    return out;
}

inline Mat controlled(std::size_t n, std::size_t control, std::size_t target, const Mat &u) {
    return embed(n, {{control, ket_bra(0, 0)}}) + embed(n, {{control, ket_bra(1, 1)}, {target, u}});
}

inline Vec phi_plus() {
    Vec v = Vec::Zero(4);
    v(0) = kH;
    v(3) = kH;
    return v;
}

/// (X^i Z^j (x) I) |Phi>.
inline Vec bell(int i, int j) {
    Mat op = identity(2);
    if (j) op = pauli_z() * op;
    if (i) op = pauli_x() * op;
    return kron(op, identity(2)) * phi_plus();
}

/// sum_ij sign(i, j) |ij><Phi_ij|.
inline Mat bell_projector_map(bool teleport_phase) {
    Mat m = Mat::Zero(4, 4);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double sign = (teleport_phase && i && j) ? -1.0 : 1.0;
            m.row(2 * i + j) = sign * bell(i, j).adjoint();
        }
    }
    return m;
}

/// rho on the qubits at `keep`, in that order, by explicit summation.
inline Mat partial_trace(const Vec &psi, std::size_t n, const std::vector<std::size_t> &keep) {
    const std::size_t k = keep.size();
    const auto dk = static_cast<Eigen::Index>(std::size_t{1} << k);
    Mat rho = Mat::Zero(dk, dk);
    auto bit = [&](std::size_t index, std::size_t q) { return (index >> (n - 1 - q)) & 1; };
    auto kept_index = [&](std::size_t index) {
        std::size_t out = 0;
        for (const std::size_t q : keep) {
            out = (out << 1) | bit(index, q);
        }
        return out;
    };
    auto traced_equal = [&](std::size_t a, std::size_t b) {
        for (std::size_t q = 0; q < n; ++q) {
            bool kept = false;
            for (const std::size_t kq : keep) {
                kept = kept || kq == q;
            }
            if (!kept && bit(a, q) != bit(b, q)) {
                return false;
            }
        }
        return true;
    };
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            if (traced_equal(a, b)) {
                rho(static_cast<Eigen::Index>(kept_index(a)), static_cast<Eigen::Index>(kept_index(b))) +=
                    psi(static_cast<Eigen::Index>(a)) * std::conj(psi(static_cast<Eigen::Index>(b)));
            }
        }
    }
    return rho;
}

inline double entropy(const Mat &rho) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(rho);
    double h = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double l = solver.eigenvalues()(i);
        if (l > 1e-15) {
            h -= l * std::log2(l);
        }
    }
    return h;
}

/// H of the qubits at `part` of a pure n-qubit state.
inline double entropy(const Vec &psi, std::size_t n, const std::vector<std::size_t> &part) {
    if (part.empty()) {
        return 0.0;
    }
    return entropy(partial_trace(psi, n, part));
}

} // namespace oracle
