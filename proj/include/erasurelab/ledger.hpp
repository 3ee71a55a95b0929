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
 * Resource accounting: per-run counters, the asymptotic resource inequalities
 * of both subprotocols, and their reduction to qubits per channel use once
 * missing ebits are bought from the channel.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "erasurelab/errors.hpp"
#include "erasurelab/io.hpp"
#include "erasurelab/trace.hpp"

namespace erasurelab {

/// Per-message (expected) amounts of each resource.
struct ResourceVector {
    double channel_uses = 0.0;
    double ebits_ab = 0.0;
    double ebits_be = 0.0;
    double ghz_abe = 0.0;
    /// Noiseless qubit-channel uses, i.e. delivered messages.
    double qbits = 0.0;

    ResourceVector &operator+=(const ResourceVector &o) {
        channel_uses += o.channel_uses;
        ebits_ab += o.ebits_ab;
        ebits_be += o.ebits_be;
        ghz_abe += o.ghz_abe;
        qbits += o.qbits;
        return *this;
    }
    friend ResourceVector operator+(ResourceVector a, const ResourceVector &b) { return a += b; }
    friend ResourceVector operator-(const ResourceVector &a, const ResourceVector &b) {
        return {a.channel_uses - b.channel_uses, a.ebits_ab - b.ebits_ab, a.ebits_be - b.ebits_be,
                a.ghz_abe - b.ghz_abe, a.qbits - b.qbits};
    }
    friend ResourceVector operator*(double s, const ResourceVector &v) {
        return {s * v.channel_uses, s * v.ebits_ab, s * v.ebits_be, s * v.ghz_abe, s * v.qbits};
    }

    bool finite() const {
        return std::isfinite(channel_uses) && std::isfinite(ebits_ab) && std::isfinite(ebits_be) &&
               std::isfinite(ghz_abe) && std::isfinite(qbits);
    }
};

/// lhs can simulate rhs (asymptotically, per invocation).
struct ResourceInequality {
    ResourceVector lhs;
    ResourceVector rhs;
};

namespace detail {
inline void require_p_below_one(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        fail(ErrorCode::InvalidProbability, "erasure probability must lie in [0, 1]");
    }
    if (p == 1.0) {
        fail(ErrorCode::PEqualsOne, "inequality undefined at p = 1");
    }
}
} // namespace detail

/// (2/(1-p)) N_p + Phi_AB >= 1 Qbit + 2(1-p) Phi_AB + 2p Gamma_ABE
inline ResourceInequality sub1_inequality(double p) {
    detail::require_p_below_one(p);
    ResourceInequality ineq;
    ineq.lhs.channel_uses = 2.0 / (1.0 - p);
    ineq.lhs.ebits_ab = 1.0;
    ineq.rhs.qbits = 1.0;
    ineq.rhs.ebits_ab = 2.0 * (1.0 - p);
    ineq.rhs.ghz_abe = 2.0 * p;
    return ineq;
}

/// Phi_AB + (1/(1-p)) [N_p + Phi_AB] >= 1 Qbit + 2 Phi_AB + (1/(1-p) - 1) Phi_BE
inline ResourceInequality sub2_inequality(double p) {
    detail::require_p_below_one(p);
    const double attempts = 1.0 / (1.0 - p);
    ResourceInequality ineq;
    ineq.lhs.channel_uses = attempts;
    ineq.lhs.ebits_ab = 1.0 + attempts;
    ineq.rhs.qbits = 1.0;
    ineq.rhs.ebits_ab = 2.0;
    ineq.rhs.ebits_be = attempts - 1.0;
    return ineq;
}

/// 1 N_p >= (1-p) Phi_AB, from one channel use plus back communication.
inline ResourceInequality ebit_supply(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        fail(ErrorCode::InvalidProbability, "erasure probability must lie in [0, 1]");
    }
    ResourceInequality ineq;
    ineq.lhs.channel_uses = 1.0;
    ineq.rhs.ebits_ab = 1.0 - p;
    return ineq;
}

/// Qubits delivered per channel use when the ebit deficit of `ineq` is paid
/// for through `supply`. GHZ and Eve-Bob byproducts are given no value.
inline double net_rate(const ResourceInequality &ineq, const ResourceInequality &supply) {
    if (!(ineq.rhs.qbits >= 1.0)) {
        fail(ErrorCode::InvalidArgument, "inequality must produce at least one qubit");
    }
    if (!(supply.lhs.channel_uses > 0.0) || !(supply.rhs.ebits_ab > 0.0)) {
        fail(ErrorCode::InfeasibleSupply, "ebit supply has no positive yield");
    }
    const double yield = supply.rhs.ebits_ab / supply.lhs.channel_uses;
    const double deficit = std::max(0.0, ineq.lhs.ebits_ab - ineq.rhs.ebits_ab);
    const double uses = ineq.lhs.channel_uses + deficit / yield;
    return ineq.rhs.qbits / uses;
}

inline ResourceInequality inequality_for(ProtocolKind kind, double p) {
    switch (kind) {
        case ProtocolKind::Sub1: return sub1_inequality(p);
        case ProtocolKind::Sub2: return sub2_inequality(p);
        default: fail(ErrorCode::InvalidArgument, "no resource inequality for this protocol");
    }
}

/// net_rate over the closed interval; the channel carries nothing at p = 1.
inline double protocol_net_rate(ProtocolKind kind, double p) {
    if (p == 1.0) {
        return 0.0;
    }
    return net_rate(inequality_for(kind, p), ebit_supply(p));
}

/// Raw counters for one run. Merging is associative and commutative.
struct ResourceLedger {
    std::size_t channel_uses = 0;
    std::size_t message_uses = 0;
    std::size_t generation_uses = 0;
    std::size_t wasted_generation_uses = 0;
    std::size_t ebits_generated = 0;
    std::size_t ebits_consumed = 0;
    std::size_t ebits_ab_produced = 0;
    std::size_t ebits_be = 0;
    std::size_t ghz_abe = 0;
    std::size_t qbits = 0;

    ResourceLedger &merge(const ResourceLedger &o) {
        channel_uses += o.channel_uses;
        message_uses += o.message_uses;
        generation_uses += o.generation_uses;
        wasted_generation_uses += o.wasted_generation_uses;
        ebits_generated += o.ebits_generated;
        ebits_consumed += o.ebits_consumed;
        ebits_ab_produced += o.ebits_ab_produced;
        ebits_be += o.ebits_be;
        ghz_abe += o.ghz_abe;
        qbits += o.qbits;
        return *this;
    }

    friend bool operator==(const ResourceLedger &, const ResourceLedger &) = default;
};

struct ReconciledResources {
    std::size_t messages = 0;
    /// Per-message means, laid out like the matching inequality.
    ResourceInequality mean;
    ResourceInequality standard_error;
};

inline ReconciledResources reconcile_statistics(const ProtocolTrace &trace) {
    if (!trace.complete || trace.per_message.empty()) {
        fail(ErrorCode::IncompleteTrace, "trace has no completed messages");
    }
    ReconciledResources out;
    out.messages = trace.per_message.size();
    const double n = static_cast<double>(out.messages);

    auto sample = [](const MessageRecord &r) {
        ResourceInequality x;
        x.lhs.channel_uses = static_cast<double>(r.channel_uses);
        x.lhs.ebits_ab = static_cast<double>(r.ebits_consumed);
        x.rhs.qbits = 1.0;
        x.rhs.ebits_ab = static_cast<double>(r.ebits_ab_produced);
        x.rhs.ebits_be = static_cast<double>(r.ebits_be);
        x.rhs.ghz_abe = static_cast<double>(r.ghz_abe);
        return x;
    };
    auto square = [](const ResourceVector &v) {
        return ResourceVector{v.channel_uses * v.channel_uses, v.ebits_ab * v.ebits_ab, v.ebits_be * v.ebits_be,
                              v.ghz_abe * v.ghz_abe, v.qbits * v.qbits};
    };
    ResourceInequality sum, sum_sq;
    for (const auto &r : trace.per_message) {
        const auto x = sample(r);
        sum.lhs += x.lhs;
        sum.rhs += x.rhs;
        sum_sq.lhs += square(x.lhs);
        sum_sq.rhs += square(x.rhs);
    }
    out.mean.lhs = (1.0 / n) * sum.lhs;
    out.mean.rhs = (1.0 / n) * sum.rhs;

    auto stderr_of = [&](const ResourceVector &s, const ResourceVector &sq) {
        auto one = [&](double a, double b) {
            if (n < 2.0) {
                return 0.0;
            }
            const double var = std::max(0.0, (b - a * a / n) / (n - 1.0));
            return std::sqrt(var / n);
        };
        return ResourceVector{one(s.channel_uses, sq.channel_uses), one(s.ebits_ab, sq.ebits_ab),
                              one(s.ebits_be, sq.ebits_be), one(s.ghz_abe, sq.ghz_abe), one(s.qbits, sq.qbits)};
    };
    out.standard_error.lhs = stderr_of(sum.lhs, sum_sq.lhs);
    out.standard_error.rhs = stderr_of(sum.rhs, sum_sq.rhs);
    return out;
}

/// Empirical per-message resources of a completed trace.
inline ResourceInequality ledger_reconcile(const ProtocolTrace &trace) { return reconcile_statistics(trace).mean; }

inline std::string inequality_csv_header() {
    return "p,protocol,lhs_channel_uses,lhs_ebits_ab,rhs_qbits,rhs_ebits_ab,rhs_ebits_be,rhs_ghz_abe,net_rate";
}

inline std::string inequality_csv_row(double p, ProtocolKind kind) {
    const ResourceInequality ineq = inequality_for(kind, p);
    return csv_join({format_number(p), std::string(to_string(kind)), format_number(ineq.lhs.channel_uses),
                     format_number(ineq.lhs.ebits_ab), format_number(ineq.rhs.qbits), format_number(ineq.rhs.ebits_ab),
                     format_number(ineq.rhs.ebits_be), format_number(ineq.rhs.ghz_abe),
                     format_number(protocol_net_rate(kind, p))});
}

} // namespace erasurelab
