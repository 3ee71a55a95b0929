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
 * Exact pure states over labeled, party-owned qubit registers.
 *
 * Basis ordering: the first label in a state's label list is the most
 * significant bit of the amplitude index. Every operation locates its targets
 * through the label list; nothing assumes adjacency.
 */

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "erasurelab/errors.hpp"
#include "erasurelab/rng.hpp"

namespace erasurelab {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 12;
inline constexpr double kNormTolerance = 1e-9;

enum class Party : std::uint8_t { Alice, Bob, Eve, Reference };

constexpr std::string_view to_string(Party party) noexcept {
    switch (party) {
        case Party::Alice: return "Alice";
        case Party::Bob: return "Bob";
        case Party::Eve: return "Eve";
        case Party::Reference: return "Reference";
    }
    return "?";
}

/// Opaque register identifier.
struct Label {
    std::uint32_t value = 0;
    friend constexpr auto operator<=>(const Label &, const Label &) = default;
};

/// Process-wide source of unused identifiers. Thread-safe.
inline Label fresh_label() {
    static std::atomic<std::uint32_t> next{1};
    return Label{next.fetch_add(1, std::memory_order_relaxed)};
}

struct SystemLabel {
    Label id;
    Party party = Party::Alice;
    friend constexpr bool operator==(const SystemLabel &, const SystemLabel &) = default;
};

inline SystemLabel fresh(Party party) { return SystemLabel{fresh_label(), party}; }

namespace detail {
struct unchecked_t {
    explicit unchecked_t() = default;
};
inline constexpr unchecked_t unchecked{};
} // namespace detail

class LabeledState {
public:
    /// The zero-qubit state (a single unit amplitude).
    LabeledState() : amplitudes_{Amplitude{1.0, 0.0}} {}

    LabeledState(std::vector<SystemLabel> labels, std::vector<Amplitude> amplitudes)
        : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
        if (labels_.size() > kMaxQubits) {
            fail(ErrorCode::SizeCap, std::to_string(labels_.size()) + " qubits exceeds the cap of " +
                                         std::to_string(kMaxQubits));
        }
        if (amplitudes_.size() != (std::size_t{1} << labels_.size())) {
            fail(ErrorCode::DimensionMismatch, "amplitude vector length must be 2^(number of labels)");
        }
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            for (std::size_t j = i + 1; j < labels_.size(); ++j) {
                if (labels_[i].id == labels_[j].id) {
                    fail(ErrorCode::DuplicateLabel, "label " + std::to_string(labels_[i].id.value));
                }
            }
        }
        if (std::abs(norm() - 1.0) > kNormTolerance) {
            fail(ErrorCode::NonNormalized, "state norm " + std::to_string(norm()));
        }
    }

    /// Skips validation; used by operations that preserve the invariants.
    LabeledState(detail::unchecked_t, std::vector<SystemLabel> labels, std::vector<Amplitude> amplitudes)
        : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {}

    std::size_t num_qubits() const noexcept { return labels_.size(); }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    const std::vector<SystemLabel> &labels() const noexcept { return labels_; }
    std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
    Amplitude amplitude(std::size_t index) const { return amplitudes_.at(index); }

    bool contains(Label id) const noexcept {
        return std::any_of(labels_.begin(), labels_.end(), [&](const SystemLabel &l) { return l.id == id; });
    }

    std::size_t position(Label id) const {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i].id == id) {
                return i;
            }
        }
        fail(ErrorCode::UnknownLabel, "label " + std::to_string(id.value));
    }

    /// Bit of `id` inside a basis index.
    std::size_t mask(Label id) const { return std::size_t{1} << (labels_.size() - 1 - position(id)); }

    Party party(Label id) const { return labels_[position(id)].party; }

    std::vector<Label> ids() const {
        std::vector<Label> out;
        out.reserve(labels_.size());
        for (const auto &l : labels_) {
            out.push_back(l.id);
        }
        return out;
    }

    std::vector<Label> owned_by(Party party) const {
        std::vector<Label> out;
        for (const auto &l : labels_) {
            if (l.party == party) {
                out.push_back(l.id);
            }
        }
        return out;
    }

    double norm() const noexcept {
        double sum = 0.0;
        for (const auto &a : amplitudes_) {
            sum += std::norm(a);
        }
        return std::sqrt(sum);
    }

    std::vector<SystemLabel> take_labels() && { return std::move(labels_); }
    std::vector<Amplitude> take_amplitudes() && { return std::move(amplitudes_); }

private:
    std::vector<SystemLabel> labels_;
    std::vector<Amplitude> amplitudes_;
};

// ---------------------------------------------------------------------------
// Construction

inline LabeledState basis_state(std::vector<SystemLabel> labels, std::size_t index) {
    std::vector<Amplitude> amps(std::size_t{1} << labels.size());
    amps.at(index) = 1.0;
    return LabeledState(std::move(labels), std::move(amps));
}

/// (|00> + |11>)/sqrt(2).
inline LabeledState make_bell(SystemLabel first, SystemLabel second) {
    const double h = std::numbers::sqrt2 / 2.0;
    return LabeledState({first, second}, {h, 0.0, 0.0, h});
}

inline LabeledState make_bell() { return make_bell(fresh(Party::Alice), fresh(Party::Bob)); }

/// (|000> + |111>)/sqrt(2).
inline LabeledState make_ghz(SystemLabel a, SystemLabel b, SystemLabel c) {
    const double h = std::numbers::sqrt2 / 2.0;
    return LabeledState({a, b, c}, {h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h});
}

inline LabeledState make_ghz() { return make_ghz(fresh(Party::Alice), fresh(Party::Bob), fresh(Party::Eve)); }

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
inline LabeledState prepare_message(double theta, double phi, SystemLabel label) {
    return LabeledState({label}, {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)});
}

inline LabeledState prepare_message(double theta, double phi) {
    return prepare_message(theta, phi, fresh(Party::Alice));
}

inline LabeledState tensor(const LabeledState &a, const LabeledState &b) {
    for (const auto &l : b.labels()) {
        if (a.contains(l.id)) {
            fail(ErrorCode::DuplicateLabel, "label " + std::to_string(l.id.value) + " present in both factors");
        }
    }
    if (a.num_qubits() + b.num_qubits() > kMaxQubits) {
        fail(ErrorCode::SizeCap, std::to_string(a.num_qubits() + b.num_qubits()) + " qubits exceeds the cap of " +
                                     std::to_string(kMaxQubits));
    }
    std::vector<SystemLabel> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    std::vector<Amplitude> amps;
    amps.reserve(a.dimension() * b.dimension());
    for (const auto &x : a.amplitudes()) {
        for (const auto &y : b.amplitudes()) {
            amps.push_back(x * y);
        }
    }
    return LabeledState(detail::unchecked, std::move(labels), std::move(amps));
}

/// Haar-random state: normalized vector of independent complex Gaussians.
inline LabeledState random_pure_state(std::vector<SystemLabel> labels, CounterRng &rng) {
    if (labels.empty() || labels.size() > kMaxQubits) {
        fail(ErrorCode::SizeCap, "random states need 1.." + std::to_string(kMaxQubits) + " qubits");
    }
    std::vector<Amplitude> amps(std::size_t{1} << labels.size());
    double sum = 0.0;
    for (auto &a : amps) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        a = {re, im};
        sum += re * re + im * im;
    }
    const double scale = 1.0 / std::sqrt(sum);
    for (auto &a : amps) {
        a *= scale;
    }
    return LabeledState(std::move(labels), std::move(amps));
}

inline LabeledState random_pure_state(std::size_t num_qubits, std::uint64_t seed, Party party = Party::Alice) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        fail(ErrorCode::SizeCap, "random states need 1.." + std::to_string(kMaxQubits) + " qubits");
    }
    std::vector<SystemLabel> labels;
    for (std::size_t i = 0; i < num_qubits; ++i) {
        labels.push_back(fresh(party));
    }
    CounterRng rng(seed);
    return random_pure_state(std::move(labels), rng);
}

// ---------------------------------------------------------------------------
// Gates

enum class Gate { X, Z, H, CX, CZ, BellBasisChange, BellToComputational };

constexpr std::string_view to_string(Gate g) noexcept {
    switch (g) {
        case Gate::X: return "X";
        case Gate::Z: return "Z";
        case Gate::H: return "H";
        case Gate::CX: return "CX";
        case Gate::CZ: return "CZ";
        case Gate::BellBasisChange: return "BellBasisChange";
        case Gate::BellToComputational: return "BellToComputational";
    }
    return "?";
}

constexpr std::size_t gate_arity(Gate g) noexcept {
    switch (g) {
        case Gate::X:
        case Gate::Z:
        case Gate::H: return 1;
        default: return 2;
    }
}

using Matrix4 = std::array<std::array<Amplitude, 4>, 4>;

/// Rows are <ij| in the (first, second) local basis.
///
/// With |Phi_ij> = (X^i Z^j (x) I)|Phi>:
///   BellToComputational  = sum_ij |ij><Phi_ij|
///   BellBasisChange      = sum_ij (-1)^{ij} |ij><Phi_ij|
/// The second is the teleportation change of basis: applied to (M, A) of
/// |psi>_M |Phi>_AB it yields (1/2) sum_ij |ij>_MA X^i Z^j |psi>_B.
inline Matrix4 two_qubit_matrix(Gate g) {
    const double h = std::numbers::sqrt2 / 2.0;
    switch (g) {
        case Gate::CX: return {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}};
        case Gate::CZ: return {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}}};
        case Gate::BellToComputational:
            return {{{h, 0, 0, h}, {h, 0, 0, -h}, {0, h, h, 0}, {0, -h, h, 0}}};
        case Gate::BellBasisChange:
            return {{{h, 0, 0, h}, {h, 0, 0, -h}, {0, h, h, 0}, {0, h, -h, 0}}};
        default: fail(ErrorCode::ArityMismatch, std::string(to_string(g)) + " is not a two-qubit gate");
    }
}

namespace detail {

inline void apply_single(std::vector<Amplitude> &amps, std::size_t m, Gate g) {
    const double h = std::numbers::sqrt2 / 2.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & m) {
            continue;
        }
        Amplitude &a0 = amps[i];
        Amplitude &a1 = amps[i | m];
        switch (g) {
            case Gate::X: std::swap(a0, a1); break;
            case Gate::Z: a1 = -a1; break;
            case Gate::H: {
                const Amplitude x = a0;
                const Amplitude y = a1;
                a0 = h * (x + y);
                a1 = h * (x - y);
                break;
            }
            default: break;
        }
    }
}

inline void apply_pair(std::vector<Amplitude> &amps, std::size_t m_first, std::size_t m_second, Gate g) {
    if (g == Gate::CX) {
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & m_first) && !(i & m_second)) {
                std::swap(amps[i], amps[i | m_second]);
            }
        }
        return;
    }
    if (g == Gate::CZ) {
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & m_first) && (i & m_second)) {
                amps[i] = -amps[i];
            }
        }
        return;
    }
    const Matrix4 u = two_qubit_matrix(g);
    const std::array<std::size_t, 4> offsets{0, m_second, m_first, m_first | m_second};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & (m_first | m_second)) {
            continue;
        }
        std::array<Amplitude, 4> in{};
        for (std::size_t r = 0; r < 4; ++r) {
            in[r] = amps[i | offsets[r]];
        }
        for (std::size_t r = 0; r < 4; ++r) {
            Amplitude acc = 0.0;
            for (std::size_t c = 0; c < 4; ++c) {
                acc += u[r][c] * in[c];
            }
            amps[i | offsets[r]] = acc;
        }
    }
}

} // namespace detail

/// Applies `g` to `targets` (control first for CX/CZ).
inline LabeledState apply_gate(LabeledState s, Gate g, std::span<const Label> targets) {
    if (targets.size() != gate_arity(g)) {
        fail(ErrorCode::ArityMismatch, std::string(to_string(g)) + " takes " + std::to_string(gate_arity(g)) +
                                           " targets, got " + std::to_string(targets.size()));
    }
    std::array<std::size_t, 2> masks{};
    for (std::size_t t = 0; t < targets.size(); ++t) {
        masks[t] = s.mask(targets[t]);
    }
    if (targets.size() == 2 && targets[0] == targets[1]) {
        fail(ErrorCode::ArityMismatch, "two-qubit gate needs distinct targets");
    }
    auto labels = std::move(s).take_labels();
    auto amps = std::move(s).take_amplitudes();
    if (targets.size() == 1) {
        detail::apply_single(amps, masks[0], g);
    } else {
        detail::apply_pair(amps, masks[0], masks[1], g);
    }
    return LabeledState(detail::unchecked, std::move(labels), std::move(amps));
}

inline LabeledState apply_gate(LabeledState s, Gate g, std::initializer_list<Label> targets) {
    return apply_gate(std::move(s), g, std::span<const Label>(targets.begin(), targets.size()));
}

/// Appends `target` in |0> and copies `source` onto it in the computational basis.
inline LabeledState coherent_copy(LabeledState s, Label source, SystemLabel target) {
    if (s.contains(target.id)) {
        fail(ErrorCode::DuplicateLabel, "copy target " + std::to_string(target.id.value) + " already in use");
    }
    s.position(source);
    LabeledState out = tensor(s, basis_state({target}, 0));
    return apply_gate(std::move(out), Gate::CX, {source, target.id});
}

/// Reassigns ownership of one register; amplitudes are untouched.
inline LabeledState transfer(LabeledState s, Label id, Party to) {
    const std::size_t pos = s.position(id);
    auto labels = std::move(s).take_labels();
    auto amps = std::move(s).take_amplitudes();
    labels[pos].party = to;
    return LabeledState(detail::unchecked, std::move(labels), std::move(amps));
}

/// Same state with labels permuted into `order` (which must be a permutation).
inline LabeledState reorder(const LabeledState &s, std::span<const Label> order) {
    const std::size_t n = s.num_qubits();
    if (order.size() != n) {
        fail(ErrorCode::LabelMismatch, "reorder needs every label exactly once");
    }
    std::vector<std::size_t> old_masks(n);
    std::vector<SystemLabel> labels(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t pos = s.position(order[j]);
        labels[j] = s.labels()[pos];
        old_masks[j] = std::size_t{1} << (n - 1 - pos);
        for (std::size_t k = 0; k < j; ++k) {
            if (order[k] == order[j]) {
                fail(ErrorCode::LabelMismatch, "reorder needs every label exactly once");
            }
        }
    }
    std::vector<Amplitude> amps(s.dimension());
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        std::size_t old_idx = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (idx & (std::size_t{1} << (n - 1 - j))) {
                old_idx |= old_masks[j];
            }
        }
        amps[idx] = s.amplitudes()[old_idx];
    }
    return LabeledState(detail::unchecked, std::move(labels), std::move(amps));
}

/// <a|b>, aligning b to a's label order. Parties are ignored.
inline Amplitude inner_product(const LabeledState &a, const LabeledState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        fail(ErrorCode::DimensionMismatch, "states differ in qubit count");
    }
    for (const auto &l : a.labels()) {
        if (!b.contains(l.id)) {
            fail(ErrorCode::LabelMismatch, "label " + std::to_string(l.id.value) + " missing from second state");
        }
    }
    const LabeledState aligned = reorder(b, a.ids());
    Amplitude acc = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        acc += std::conj(a.amplitudes()[i]) * aligned.amplitudes()[i];
    }
    return acc;
}

/// Fidelity of two pure states, |<a|b>|.
inline double pure_fidelity(const LabeledState &a, const LabeledState &b) { return std::abs(inner_product(a, b)); }

// ---------------------------------------------------------------------------
// Factoring

struct Factorization {
    LabeledState rest;
    LabeledState factor;
    /// |<s | rest (x) factor>|; 1 for an exact product.
    double fidelity = 0.0;
};

/// Splits `s` into rest (x) factor-on-`part`. Raises NotProduct unless the
/// split reproduces `s` with fidelity at least 1 - tolerance.
inline Factorization factor_out(const LabeledState &s, std::span<const Label> part, double tolerance = 1e-9) {
    const std::size_t n = s.num_qubits();
    std::vector<std::size_t> part_pos;
    for (const Label id : part) {
        const std::size_t pos = s.position(id);
        if (std::find(part_pos.begin(), part_pos.end(), pos) != part_pos.end()) {
            fail(ErrorCode::DuplicateLabel, "factor part lists a label twice");
        }
        part_pos.push_back(pos);
    }
    std::vector<std::size_t> rest_pos;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(part_pos.begin(), part_pos.end(), i) == part_pos.end()) {
            rest_pos.push_back(i);
        }
    }
    const std::size_t rows = std::size_t{1} << rest_pos.size();
    const std::size_t cols = std::size_t{1} << part_pos.size();
    auto split = [&](std::size_t idx, const std::vector<std::size_t> &positions) {
        std::size_t out = 0;
        for (const std::size_t pos : positions) {
            out = (out << 1) | ((idx >> (n - 1 - pos)) & 1u);
        }
        return out;
    };
    std::vector<Amplitude> matrix(rows * cols);
    for (std::size_t idx = 0; idx < s.dimension(); ++idx) {
        matrix[split(idx, rest_pos) * cols + split(idx, part_pos)] = s.amplitudes()[idx];
    }
    // For a product, every nonzero row is proportional to the factor.
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double sq = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            sq += std::norm(matrix[r * cols + c]);
        }
        if (sq > best_norm) {
            best_norm = sq;
            best = r;
        }
    }
    std::vector<Amplitude> factor(cols);
    const double inv = 1.0 / std::sqrt(best_norm);
    for (std::size_t c = 0; c < cols; ++c) {
        factor[c] = matrix[best * cols + c] * inv;
    }
    std::vector<Amplitude> rest(rows);
    double weight = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        Amplitude acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            acc += matrix[r * cols + c] * std::conj(factor[c]);
        }
        rest[r] = acc;
        weight += std::norm(acc);
    }
    const double fidelity = std::sqrt(weight);
    if (fidelity < 1.0 - tolerance) {
        fail(ErrorCode::NotProduct, "registers are entangled with the rest (fidelity " + std::to_string(fidelity) + ")");
    }
    for (auto &a : rest) {
        a /= fidelity;
    }
    std::vector<SystemLabel> rest_labels;
    for (const std::size_t pos : rest_pos) {
        rest_labels.push_back(s.labels()[pos]);
    }
    std::vector<SystemLabel> part_labels;
    for (const std::size_t pos : part_pos) {
        part_labels.push_back(s.labels()[pos]);
    }
    return Factorization{LabeledState(detail::unchecked, std::move(rest_labels), std::move(rest)),
                         LabeledState(detail::unchecked, std::move(part_labels), std::move(factor)), fidelity};
}

inline Factorization factor_out(const LabeledState &s, std::initializer_list<Label> part, double tolerance = 1e-9) {
    return factor_out(s, std::span<const Label>(part.begin(), part.size()), tolerance);
}

} // namespace erasurelab
