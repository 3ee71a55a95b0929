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

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "erasurelab/channel.hpp"
#include "erasurelab/state.hpp"

namespace erasurelab {

enum class ProtocolKind : std::uint8_t {
    /// Coherent teleportation with retransmitted coherent copies.
    Sub1,
    /// Coherent teleportation with coherent superdense coding.
    Sub2,
    /// Sends the message register itself; used only for toy audits.
    Direct,
};

constexpr std::string_view to_string(ProtocolKind kind) noexcept {
    switch (kind) {
        case ProtocolKind::Sub1: return "sub1";
        case ProtocolKind::Sub2: return "sub2";
        case ProtocolKind::Direct: return "direct";
    }
    return "?";
}

/// Per-message accounting. For Sub2, `k` counts erased superdense attempts
/// and `l` stays zero.
struct MessageRecord {
    ProtocolKind protocol = ProtocolKind::Sub1;
    std::size_t k = 0;
    std::size_t l = 0;
    int indicator_k = 0;
    int indicator_l = 0;
    /// Transmissions spent on the message itself (ebit generation excluded).
    std::size_t channel_uses = 0;
    std::size_t ebits_consumed = 0;
    std::size_t ebits_ab_produced = 0;
    std::size_t ebits_be = 0;
    std::size_t ghz_abe = 0;
    /// Fidelity of Bob's output (jointly with any reference) against the input.
    double fidelity = 0.0;
    /// Fidelity of the message's registers against the expected residual
    /// resource state; NaN when that check was not run.
    double bookkeeping_fidelity = std::numeric_limits<double>::quiet_NaN();
    Label output;
};

/// Global state right after one channel use. The transmitted register has
/// already changed owner, but the amplitudes are those it was sent with.
struct Snapshot {
    LabeledState state;
    Label sent;
    /// Bob's registers immediately before the use.
    std::vector<Label> bob_before;
    bool delivered = false;
};

struct ProtocolTrace {
    std::vector<TransmitOutcome> events;
    std::vector<MessageRecord> per_message;
    std::vector<Snapshot> snapshots;
    /// Bob's decoded output registers, one per message.
    std::vector<Label> decoded_register;
    /// Reference registers purifying the inputs, one per message when used.
    std::vector<Label> reference;
    std::optional<LabeledState> final_state;
    bool complete = true;
};

struct FidelityReport {
    double fidelity = 0.0;
    /// 1 - fidelity, the epsilon fed into the bound checks.
    double epsilon = 1.0;
};

inline FidelityReport make_fidelity_report(double fidelity) {
    return FidelityReport{fidelity, std::max(0.0, 1.0 - fidelity)};
}

} // namespace erasurelab
