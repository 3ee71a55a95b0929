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
 * Erasure-channel protocols assisted by back classical communication.
 *
 * Both subprotocols start from coherent teleportation: Alice rotates her
 * message M and her ebit half A so that the pair holds |ij>, while Bob's half
 * holds X^i Z^j |psi>. What differs is how |ij> reaches Bob.
 *
 *  - Sub1 copies i and j into fresh registers (CX in the computational basis)
 *    and sends each copy until one is delivered. Every erased copy leaves a
 *    correlated record with Eve; the first one turns the would-be ebit into a
 *    GHZ state, later ones are compressed away by an Eve-local CX.
 *  - Sub2 encodes |ij> into a fresh ebit by superdense coding and sends
 *    Alice's half until delivered. Each erased attempt leaves a Bell state
 *    shared by Eve and Bob, which Bob rotates back to |Phi> once he knows ij
 *    (coherently).
 *
 * All of Bob's measurements are deferred: corrections are controlled gates,
 * so every run stays a pure state over Alice, Bob, Eve and reference
 * registers.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "erasurelab/channel.hpp"
#include "erasurelab/density.hpp"
#include "erasurelab/errors.hpp"
#include "erasurelab/io.hpp"
#include "erasurelab/ledger.hpp"
#include "erasurelab/rng.hpp"
#include "erasurelab/state.hpp"
#include "erasurelab/trace.hpp"

namespace erasurelab {

enum class Strategy { Sub1, Sub2, Auto };

constexpr std::string_view to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::Sub1: return "sub1";
        case Strategy::Sub2: return "sub2";
        case Strategy::Auto: return "auto";
    }
    return "?";
}

inline Strategy parse_strategy(std::string_view text) {
    if (text == "sub1") return Strategy::Sub1;
    if (text == "sub2") return Strategy::Sub2;
    if (text == "auto") return Strategy::Auto;
    fail(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(text) + "'");
}

/// Auto picks Sub2 up to and including p = 1/2, where both rates equal 1/4.
inline ProtocolKind resolve_strategy(Strategy s, double p) {
    switch (s) {
        case Strategy::Sub1: return ProtocolKind::Sub1;
        case Strategy::Sub2: return ProtocolKind::Sub2;
        case Strategy::Auto: return p <= 0.5 ? ProtocolKind::Sub2 : ProtocolKind::Sub1;
    }
    return ProtocolKind::Sub2;
}

struct EbitPair {
    Label alice;
    Label bob;
};

struct SessionOptions {
    /// Factor verified product registers out of the live state after use.
    bool retire_registers = true;
    bool record_snapshots = false;
    /// Buy ebits from the channel whenever the pool is empty.
    bool auto_provision = true;
    /// Sub2 only: rotate each Eve-shared pair right after its erasure rather
    /// than after decoding. See subprotocol2_send.
    bool eager_eve_correction = true;
    /// Compare each message's registers against the expected residual state.
    /// Always on when registers are retired.
    bool verify_bookkeeping = true;
    /// Ebits lent to the run at the start and paid back by close().
    std::size_t catalyst_ebits = 0;
    double tolerance = 1e-9;
};

struct SendResult {
    Label output;
    MessageRecord record;
};

/// One protocol run: the global state, the channel with its random stream,
/// the ebit pool, the ledger and the trace. Strictly sequential.
class Session {
public:
    explicit Session(ChannelConfig cfg, SessionOptions opts = {}, std::uint64_t run_index = 0)
        : opts_(opts), channel_(cfg, run_index),
          message_rng_(cfg.seed, stream_index(run_index, StreamPurpose::Messages)), banked_(opts.catalyst_ebits) {}

    const LabeledState &state() const noexcept { return state_; }
    const SessionOptions &options() const noexcept { return opts_; }
    ErasureChannel &channel() noexcept { return channel_; }
    const ErasureChannel &channel() const noexcept { return channel_; }
    ResourceLedger &ledger() noexcept { return ledger_; }
    const ResourceLedger &ledger() const noexcept { return ledger_; }
    ProtocolTrace &trace() noexcept { return trace_; }
    const ProtocolTrace &trace() const noexcept { return trace_; }
    CounterRng &message_rng() noexcept { return message_rng_; }

    void adopt(const LabeledState &s) { state_ = tensor(state_, s); }

    void apply(Gate g, std::initializer_list<Label> targets) { state_ = apply_gate(std::move(state_), g, targets); }

    void copy(Label source, SystemLabel target) { state_ = coherent_copy(std::move(state_), source, target); }

    void replace_state(LabeledState s) { state_ = std::move(s); }

    TransmitOutcome transmit(Label qubit, UsePurpose purpose) {
        std::vector<Label> bob_before;
        if (opts_.record_snapshots) {
            bob_before = state_.owned_by(Party::Bob);
        }
        auto [next, outcome] = channel_.transmit(std::move(state_), qubit, purpose);
        state_ = std::move(next);
        ++ledger_.channel_uses;
        if (purpose == UsePurpose::EbitGeneration) {
            ++ledger_.generation_uses;
        } else {
            ++ledger_.message_uses;
        }
        trace_.events.push_back(outcome);
        if (opts_.record_snapshots) {
            trace_.snapshots.push_back(Snapshot{state_, qubit, std::move(bob_before), outcome.delivered});
        }
        return outcome;
    }

    std::size_t available_ebits() const noexcept { return live_.size() + banked_; }
    std::size_t banked_ebits() const noexcept { return banked_; }

    /// One channel use: Alice prepares |Phi> locally and sends one half. On
    /// delivery the pair joins the pool; on erasure Eve keeps her half.
    std::optional<EbitPair> generate_ebit() {
        const SystemLabel kept = fresh(Party::Alice);
        const SystemLabel sent = fresh(Party::Alice);
        adopt(make_bell(kept, sent));
        const TransmitOutcome out = transmit(sent.id, UsePurpose::EbitGeneration);
        if (!out.delivered) {
            ++ledger_.wasted_generation_uses;
            if (opts_.retire_registers) {
                retire_expected(make_bell(kept, SystemLabel{sent.id, Party::Eve}));
            }
            return std::nullopt;
        }
        ++ledger_.ebits_generated;
        const EbitPair pair{kept.id, sent.id};
        live_.push_back(pair);
        return pair;
    }

    EbitPair acquire_ebit() {
        if (live_.empty() && banked_ == 0) {
            if (!opts_.auto_provision) {
                fail(ErrorCode::NoEbitAvailable, "ebit pool is empty");
            }
            while (!generate_ebit()) {
            }
        }
        if (!live_.empty()) {
            const EbitPair pair = live_.front();
            live_.pop_front();
            return pair;
        }
        --banked_;
        const SystemLabel a = fresh(Party::Alice);
        const SystemLabel b = fresh(Party::Bob);
        adopt(make_bell(a, b));
        return EbitPair{a.id, b.id};
    }

    /// Returns a verified |Phi> pair to the pool.
    void deposit(EbitPair pair) {
        if (opts_.retire_registers) {
            retire_expected(make_bell(SystemLabel{pair.alice, Party::Alice}, SystemLabel{pair.bob, Party::Bob}));
            ++banked_;
        } else {
            live_.push_back(pair);
        }
    }

    void bank(std::size_t ebits) noexcept { banked_ += ebits; }

    /// Fidelity of the registers of `expected` with that pure state.
    double match(const LabeledState &expected) const {
        if (expected.num_qubits() == state_.num_qubits()) {
            return pure_fidelity(state_, expected);
        }
        const std::vector<Label> ids = expected.ids();
        return fidelity_with_pure(partial_trace(state_, ids), expected);
    }

    /// Removes the registers of `expected` after checking they hold exactly
    /// that state as a product factor. Returns the verified fidelity.
    double retire_expected(const LabeledState &expected) {
        const std::vector<Label> ids = expected.ids();
        Factorization f = factor_out(state_, ids, opts_.tolerance);
        const double fid = f.fidelity * pure_fidelity(f.factor, expected);
        if (fid < 1.0 - opts_.tolerance) {
            fail(ErrorCode::NotProduct, "retired registers differ from the expected state (fidelity " +
                                            std::to_string(fid) + ")");
        }
        state_ = std::move(f.rest);
        return fid;
    }

    /// Pays back the catalyst loan, buying ebits from the channel if short.
    void close() {
        std::size_t owed = opts_.catalyst_ebits;
        opts_.catalyst_ebits = 0;
        while (owed > 0) {
            if (available_ebits() == 0) {
                generate_ebit();
                continue;
            }
            if (!live_.empty()) {
                const EbitPair pair = live_.front();
                live_.pop_front();
                if (opts_.retire_registers) {
                    retire_expected(
                        make_bell(SystemLabel{pair.alice, Party::Alice}, SystemLabel{pair.bob, Party::Bob}));
                }
            } else {
                --banked_;
            }
            --owed;
        }
    }

    struct MessageContext {
        Label message;
        std::vector<Label> input_labels;
        DensityOp input;
        /// The pure state of the message and its references, when they
        /// form a product factor.
        std::optional<LabeledState> psi;
        std::size_t uses_before = 0;
    };

    MessageContext begin_message(Label message) {
        std::vector<Label> labels{message};
        const auto refs = state_.owned_by(Party::Reference);
        labels.insert(labels.end(), refs.begin(), refs.end());
        MessageContext ctx{message, labels, partial_trace(state_, labels), std::nullopt, channel_.uses()};
        try {
            ctx.psi = factor_out(state_, labels, opts_.tolerance).factor;
        } catch (const Error &) {
            ctx.psi.reset();
        }
        return ctx;
    }

    /// Fidelity checks, retirement and accounting at the end of a message.
    /// `residual` lists the expected resource factors left by the protocol,
    /// `pairs` the Alice-Bob ebits among them.
    SendResult finish_message(const MessageContext &ctx, MessageRecord rec, Label output,
                              const std::vector<LabeledState> &residual, const std::vector<EbitPair> &pairs) {
        rec.output = output;
        std::vector<Label> out_labels = ctx.input_labels;
        out_labels.front() = output;
        const DensityOp produced = partial_trace(state_, out_labels);
        rec.fidelity = fidelity(ctx.input, relabel(produced, std::span<const Label>(&output, 1),
                                                   std::span<const Label>(&ctx.message, 1)));
        if (state_.party(output) != Party::Bob) {
            // Lost to Eve: Bob holds nothing.
            rec.fidelity = 0.0;
        }

        const bool check = opts_.retire_registers || opts_.verify_bookkeeping;
        const bool has_refs = ctx.input_labels.size() > 1;
        if (check && ctx.psi) {
            LabeledState expected = relabeled_psi(*ctx.psi, ctx.message, output);
            for (const auto &factor : residual) {
                expected = tensor(factor, expected);
            }
            if (opts_.retire_registers && !has_refs) {
                rec.bookkeeping_fidelity = retire_expected(expected);
            } else {
                // References stay with the caller; only the resources go.
                rec.bookkeeping_fidelity = match(expected);
                if (opts_.retire_registers) {
                    for (const auto &factor : residual) {
                        retire_expected(factor);
                    }
                }
            }
        } else if (opts_.retire_registers) {
            for (const auto &factor : residual) {
                retire_expected(factor);
            }
        }
        if (opts_.retire_registers) {
            banked_ += pairs.size();
        } else {
            live_.insert(live_.end(), pairs.begin(), pairs.end());
        }

        ledger_.ebits_consumed += rec.ebits_consumed;
        ledger_.ebits_ab_produced += rec.ebits_ab_produced;
        ledger_.ebits_be += rec.ebits_be;
        ledger_.ghz_abe += rec.ghz_abe;
        ++ledger_.qbits;
        trace_.per_message.push_back(rec);
        trace_.decoded_register.push_back(output);
        if (opts_.record_snapshots) {
            trace_.final_state = state_;
        }
        return SendResult{output, rec};
    }

private:
    /// `psi` with the message register renamed to Bob's output.
    static LabeledState relabeled_psi(const LabeledState &psi, Label message, Label output) {
        std::vector<SystemLabel> labels = psi.labels();
        for (auto &l : labels) {
            if (l.id == message) {
                l = SystemLabel{output, Party::Bob};
            }
        }
        std::vector<Amplitude> amps(psi.amplitudes().begin(), psi.amplitudes().end());
        return LabeledState(std::move(labels), std::move(amps));
    }

    SessionOptions opts_;
    ErasureChannel channel_;
    CounterRng message_rng_;
    LabeledState state_;
    std::deque<EbitPair> live_;
    std::size_t banked_ = 0;
    ResourceLedger ledger_;
    ProtocolTrace trace_;
};

/// Bob's coherent Bell measurement on (d1, d2): |Phi_ij> -> |ij>.
inline LabeledState bell_measure_decode(LabeledState state, Label d1, Label d2) {
    if (state.party(d1) != Party::Bob || state.party(d2) != Party::Bob) {
        fail(ErrorCode::NotOwnedByBob, "Bell decoding needs both registers in Bob's hands");
    }
    return apply_gate(std::move(state), Gate::BellToComputational, {d1, d2});
}

namespace detail {

struct CopyDelivery {
    Label delivered;
    std::size_t erasures = 0;
    std::optional<Label> eve_record;
    std::vector<Label> padding;
};

/// Sends coherent copies of `source` until one reaches Bob. Eve's first copy
/// is kept; each later one is cleared by CX from the first (an Eve-local map
/// |i>|i> -> |i>|0>), then retired when the session retires registers.
inline CopyDelivery send_copies(Session &s, Label source) {
    CopyDelivery out;
    const std::size_t cap = s.channel().config().max_retransmits;
    while (true) {
        if (out.erasures >= cap) {
            fail(ErrorCode::RetransmitCapExceeded,
                 "register erased on all " + std::to_string(cap) + " allowed attempts");
        }
        const SystemLabel copy = fresh(Party::Alice);
        s.copy(source, copy);
        if (s.transmit(copy.id, UsePurpose::Message).delivered) {
            out.delivered = copy.id;
            return out;
        }
        ++out.erasures;
        if (!out.eve_record) {
            out.eve_record = copy.id;
            continue;
        }
        s.apply(Gate::CX, {*out.eve_record, copy.id});
        if (s.options().retire_registers) {
            s.retire_expected(basis_state({SystemLabel{copy.id, Party::Eve}}, 0));
        } else {
            out.padding.push_back(copy.id);
        }
    }
}

inline LabeledState bell_on(Label a, Label b) {
    return make_bell(SystemLabel{a, Party::Alice}, SystemLabel{b, Party::Bob});
}

} // namespace detail

/// Coherent teleportation with retransmitted coherent copies of i and j.
/// Leaves Gamma_ABE^(1_k + 1_l) (x) Phi_AB^(2 - 1_k - 1_l) (x) |psi>_B.
inline SendResult subprotocol1_send(Session &s, Label message) {
    const auto ctx = s.begin_message(message);
    MessageRecord rec;
    rec.protocol = ProtocolKind::Sub1;

    const EbitPair tele = s.acquire_ebit();
    rec.ebits_consumed = 1;
    s.apply(Gate::BellBasisChange, {message, tele.alice});

    const detail::CopyDelivery ci = detail::send_copies(s, message);
    const detail::CopyDelivery cj = detail::send_copies(s, tele.alice);
    s.apply(Gate::CX, {ci.delivered, tele.bob});
    s.apply(Gate::CZ, {cj.delivered, tele.bob});

    rec.k = ci.erasures;
    rec.l = cj.erasures;
    rec.indicator_k = rec.k > 0 ? 1 : 0;
    rec.indicator_l = rec.l > 0 ? 1 : 0;
    rec.channel_uses = 2 + rec.k + rec.l;
    rec.ghz_abe = static_cast<std::size_t>(rec.indicator_k + rec.indicator_l);
    rec.ebits_ab_produced = 2 - rec.ghz_abe;

    std::vector<LabeledState> residual;
    std::vector<EbitPair> pairs;
    for (const auto &[source, copy] : {std::pair{message, &ci}, std::pair{tele.alice, &cj}}) {
        if (copy->eve_record) {
            residual.push_back(make_ghz(SystemLabel{source, Party::Alice}, SystemLabel{copy->delivered, Party::Bob},
                                        SystemLabel{*copy->eve_record, Party::Eve}));
        } else {
            residual.push_back(detail::bell_on(source, copy->delivered));
            pairs.push_back(EbitPair{source, copy->delivered});
        }
        for (const Label pad : copy->padding) {
            residual.push_back(basis_state({SystemLabel{pad, Party::Eve}}, 0));
        }
    }
    return s.finish_message(ctx, rec, tele.bob, residual, pairs);
}

/// Coherent teleportation with coherent superdense coding of |ij>.
///
/// Each attempt spends a fresh ebit (C1, C2): Alice applies Z^j then X^i to
/// C1, making |Phi_ij>, and sends C1. After the delivered attempt Bob decodes
/// (C1, C2) -> |ij>, corrects his teleportation half, and rotates every
/// Eve-shared pair (E, C2') from |Phi_ij> back to |Phi> by applying X^i Z^j
/// to C2'. The run ends with Phi_AB^2 (x) Phi_EB^k (x) |psi>_B.
///
/// With `eager_eve_correction`, the rotation of an erased pair is simulated
/// right after the erasure using M and A as controls instead of Bob's decoded
/// copy. Both hold the same computational-basis value in every branch, the
/// rotation commutes with every later step, and so the final state is
/// identical; the pair can then be verified and retired immediately, which
/// keeps the live register count independent of k.
inline SendResult subprotocol2_send(Session &s, Label message) {
    const auto ctx = s.begin_message(message);
    MessageRecord rec;
    rec.protocol = ProtocolKind::Sub2;

    const EbitPair tele = s.acquire_ebit();
    rec.ebits_consumed = 1;
    s.apply(Gate::BellBasisChange, {message, tele.alice});

    const std::size_t cap = s.channel().config().max_retransmits;
    std::vector<EbitPair> pending;
    std::vector<LabeledState> residual;
    EbitPair carrier{};
    while (true) {
        if (rec.k >= cap) {
            fail(ErrorCode::RetransmitCapExceeded,
                 "superdense carrier erased on all " + std::to_string(cap) + " allowed attempts");
        }
        carrier = s.acquire_ebit();
        ++rec.ebits_consumed;
        s.apply(Gate::CZ, {tele.alice, carrier.alice});
        s.apply(Gate::CX, {message, carrier.alice});
        if (s.transmit(carrier.alice, UsePurpose::Message).delivered) {
            break;
        }
        ++rec.k;
        if (s.options().eager_eve_correction) {
            s.apply(Gate::CZ, {tele.alice, carrier.bob});
            s.apply(Gate::CX, {message, carrier.bob});
            const LabeledState shared =
                make_bell(SystemLabel{carrier.alice, Party::Eve}, SystemLabel{carrier.bob, Party::Bob});
            if (s.options().retire_registers) {
                s.retire_expected(shared);
            } else {
                residual.push_back(shared);
            }
        } else {
            pending.push_back(carrier);
        }
    }

    const Label d1 = carrier.alice;
    const Label d2 = carrier.bob;
    s.replace_state(bell_measure_decode(s.state(), d1, d2));
    s.apply(Gate::CX, {d1, tele.bob});
    s.apply(Gate::CZ, {d2, tele.bob});
    for (const EbitPair &pair : pending) {
        s.apply(Gate::CZ, {d2, pair.bob});
        s.apply(Gate::CX, {d1, pair.bob});
        residual.push_back(make_bell(SystemLabel{pair.alice, Party::Eve}, SystemLabel{pair.bob, Party::Bob}));
    }

    rec.indicator_k = rec.k > 0 ? 1 : 0;
    rec.channel_uses = rec.k + 1;
    rec.ebits_ab_produced = 2;
    rec.ebits_be = rec.k;

    residual.push_back(detail::bell_on(message, d1));
    residual.push_back(detail::bell_on(tele.alice, d2));
    const std::vector<EbitPair> pairs{{message, d1}, {tele.alice, d2}};
    return s.finish_message(ctx, rec, tele.bob, residual, pairs);
}

/// Transmits the message register as is. Only meaningful for audits.
inline SendResult direct_send(Session &s, Label message) {
    const auto ctx = s.begin_message(message);
    MessageRecord rec;
    rec.protocol = ProtocolKind::Direct;
    const TransmitOutcome out = s.transmit(message, UsePurpose::Message);
    rec.k = out.delivered ? 0 : 1;
    rec.indicator_k = static_cast<int>(rec.k);
    rec.channel_uses = 1;
    return s.finish_message(ctx, rec, message, {}, {});
}

inline SendResult send_message(Session &s, ProtocolKind kind, Label message) {
    switch (kind) {
        case ProtocolKind::Sub1: return subprotocol1_send(s, message);
        case ProtocolKind::Sub2: return subprotocol2_send(s, message);
        case ProtocolKind::Direct: return direct_send(s, message);
    }
    fail(ErrorCode::InvalidArgument, "unknown protocol");
}

/// Ebits a protocol needs on hand before its first message.
constexpr std::size_t catalyst_for(ProtocolKind kind) noexcept {
    switch (kind) {
        case ProtocolKind::Sub1: return 1;
        case ProtocolKind::Sub2: return 2;
        default: return 0;
    }
}

struct RunStats {
    double p = 0.0;
    Strategy requested = Strategy::Auto;
    ProtocolKind protocol = ProtocolKind::Sub2;
    std::size_t messages = 0;
    std::size_t channel_uses = 0;
    double empirical_rate = 0.0;
    double mean_fidelity = 0.0;
    double min_fidelity = 1.0;
    double min_bookkeeping_fidelity = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t run_index = 0;
    std::size_t max_retransmits = 0;
    ResourceLedger ledger;
    ProtocolTrace trace;

    /// All delivered messages reproduced the input within `tolerance`.
    bool all_exact(double tolerance = 1e-9) const { return min_fidelity >= 1.0 - tolerance; }
};

/// Sends `num_messages` Haar-random qubits through the chosen protocol,
/// buying ebits from the channel on demand. The run starts with the ebits
/// its first message needs on loan and repays them at the end, so at p = 0
/// Sub2 spends exactly one use per message.
inline RunStats run_protocol(double p, std::size_t num_messages, Strategy strategy, ChannelConfig cfg,
                             std::uint64_t run_index = 0) {
    if (num_messages < 1) {
        fail(ErrorCode::InvalidArgument, "num_messages must be at least 1");
    }
    cfg.p = p;
    cfg.validate();
    const ProtocolKind kind = resolve_strategy(strategy, p);
    SessionOptions opts;
    opts.catalyst_ebits = catalyst_for(kind);
    Session session(cfg, opts, run_index);

    RunStats stats;
    stats.p = p;
    stats.requested = strategy;
    stats.protocol = kind;
    stats.messages = num_messages;
    stats.seed = cfg.seed;
    stats.run_index = run_index;
    stats.max_retransmits = cfg.max_retransmits;

    double fidelity_sum = 0.0;
    for (std::size_t t = 0; t < num_messages; ++t) {
        auto &rng = session.message_rng();
        const double theta = std::acos(1.0 - 2.0 * rng.uniform());
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        const SystemLabel m = fresh(Party::Alice);
        session.adopt(prepare_message(theta, phi, m));
        const SendResult r = send_message(session, kind, m.id);
        fidelity_sum += r.record.fidelity;
        stats.min_fidelity = std::min(stats.min_fidelity, r.record.fidelity);
        if (!std::isnan(r.record.bookkeeping_fidelity)) {
            stats.min_bookkeeping_fidelity = std::min(stats.min_bookkeeping_fidelity, r.record.bookkeeping_fidelity);
        }
    }
    session.close();

    stats.channel_uses = session.channel().uses();
    stats.empirical_rate = static_cast<double>(num_messages) / static_cast<double>(stats.channel_uses);
    stats.mean_fidelity = fidelity_sum / static_cast<double>(num_messages);
    stats.ledger = session.ledger();
    stats.trace = std::move(session.trace());
    return stats;
}

inline nlohmann::ordered_json to_json(const ResourceLedger &l) {
    nlohmann::ordered_json j;
    j["channel_uses"] = l.channel_uses;
    j["message_uses"] = l.message_uses;
    j["generation_uses"] = l.generation_uses;
    j["wasted_generation_uses"] = l.wasted_generation_uses;
    j["ebits_generated"] = l.ebits_generated;
    j["ebits_consumed"] = l.ebits_consumed;
    j["ebits_ab_produced"] = l.ebits_ab_produced;
    j["ebits_be"] = l.ebits_be;
    j["ghz_abe"] = l.ghz_abe;
    j["qbits"] = l.qbits;
    return j;
}

inline nlohmann::ordered_json to_json(const RunStats &s) {
    nlohmann::ordered_json j;
    j["p"] = s.p;
    j["strategy"] = std::string(to_string(s.protocol));
    j["requested_strategy"] = std::string(to_string(s.requested));
    j["messages"] = s.messages;
    j["channel_uses"] = s.channel_uses;
    j["empirical_rate"] = s.empirical_rate;
    j["closed_form_rate"] = protocol_net_rate(s.protocol, s.p);
    j["mean_fidelity"] = s.mean_fidelity;
    j["min_fidelity"] = s.min_fidelity;
    j["min_bookkeeping_fidelity"] = s.min_bookkeeping_fidelity;
    j["seed"] = s.seed;
    j["max_retransmits"] = s.max_retransmits;
    j["truncated_tail_probability"] = truncated_tail_probability(s.p, s.max_retransmits);
    j["ledger"] = to_json(s.ledger);
    return j;
}

inline std::string run_stats_csv_header() { return "p,strategy,messages,channel_uses,empirical_rate,mean_fidelity,seed"; }

inline std::string run_stats_csv_row(const RunStats &s) {
    return csv_join({format_number(s.p), std::string(to_string(s.protocol)), std::to_string(s.messages),
                     std::to_string(s.channel_uses), format_number(s.empirical_rate), format_number(s.mean_fidelity),
                     std::to_string(s.seed)});
}

} // namespace erasurelab
