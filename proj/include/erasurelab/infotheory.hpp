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
 * Numerical checks of the entropy toolbox behind the upper bound: four
 * entropy inequalities, the Fannes continuity step, the trace-distance /
 * fidelity step, and a toy-scale audit of the per-use information sums.
 *
 * Every check returns a slack (bound minus quantity) so that a negative value
 * beyond 1e-9 is a violation and points at a bug in the entropy code.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "erasurelab/density.hpp"
#include "erasurelab/errors.hpp"
#include "erasurelab/parallel.hpp"
#include "erasurelab/protocols.hpp"
#include "erasurelab/rng.hpp"
#include "erasurelab/state.hpp"
#include "erasurelab/trace.hpp"

namespace erasurelab {

inline constexpr double kSlackTolerance = 1e-9;

struct TripartiteSample {
    /// Pure; any labels outside a, b, c act as a hidden purifier.
    LabeledState state;
    std::vector<Label> a, b, c;
    /// Subset of b; only inequality (iv) needs it.
    std::optional<std::vector<Label>> e;
};

enum class Lemma1Part { I, II, III, IV };

inline constexpr std::array<Lemma1Part, 4> kLemma1Parts{Lemma1Part::I, Lemma1Part::II, Lemma1Part::III,
                                                        Lemma1Part::IV};

constexpr std::string_view to_string(Lemma1Part part) noexcept {
    switch (part) {
        case Lemma1Part::I: return "i";
        case Lemma1Part::II: return "ii";
        case Lemma1Part::III: return "iii";
        case Lemma1Part::IV: return "iv";
    }
    return "?";
}

namespace detail {

inline std::vector<Label> joined(std::initializer_list<std::span<const Label>> parts) {
    std::vector<Label> out;
    for (const auto &p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

} // namespace detail

/// RHS - LHS of the selected inequality:
///   (i)   I(A;BC) - [I(AB;C) - I(B;C)]
///   (ii)  I(A>BC) - I(A>B)
///   (iii) I(AB>C) - [I(A>C) + I(B>C)]
///   (iv)  2 H(CE) - [I(A>BC) - I(A>B)]    for E a subset of B
inline double lemma1_slack(const TripartiteSample &sample, Lemma1Part which) {
    const std::span<const Label> a(sample.a), b(sample.b), c(sample.c);
    detail::require_disjoint(a, b);
    detail::require_disjoint(a, c);
    detail::require_disjoint(b, c);
    const auto &s = sample.state;
    auto h = [&](std::initializer_list<std::span<const Label>> parts) {
        return entropy_of(s, detail::joined(parts));
    };
    switch (which) {
        case Lemma1Part::I: {
            const double lhs = mutual_information(s, detail::joined({a, b}), c) - mutual_information(s, b, c);
            return mutual_information(s, a, detail::joined({b, c})) - lhs;
        }
        case Lemma1Part::II:
            return coherent_information(s, a, detail::joined({b, c})) - coherent_information(s, a, b);
        case Lemma1Part::III:
            return coherent_information(s, detail::joined({a, b}), c) -
                   (coherent_information(s, a, c) + coherent_information(s, b, c));
        case Lemma1Part::IV: {
            if (!sample.e) {
                fail(ErrorCode::MissingE, "inequality (iv) needs a designated E inside B");
            }
            const std::span<const Label> e(*sample.e);
            for (const Label l : e) {
                if (std::find(b.begin(), b.end(), l) == b.end()) {
                    fail(ErrorCode::InvalidArgument, "E must be a subset of B");
                }
            }
            const double lhs = coherent_information(s, a, detail::joined({b, c})) - coherent_information(s, a, b);
            return 2.0 * h({c, e}) - lhs;
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown inequality");
}

/// Qubit counts of A, B and C.
struct PartProfile {
    std::size_t a = 1;
    std::size_t b = 1;
    std::size_t c = 1;
};

inline constexpr std::array<PartProfile, 3> kLemma1Profiles{PartProfile{1, 1, 1}, PartProfile{1, 2, 1},
                                                            PartProfile{2, 1, 1}};

/// Haar-random pure state on A, B, C and `hidden` purifier qubits, so the
/// marginal on ABC is mixed whenever hidden > 0. E is a uniformly random
/// subset of B.
inline TripartiteSample random_tripartite_sample(PartProfile profile, std::size_t hidden, CounterRng &rng) {
    TripartiteSample out;
    std::vector<SystemLabel> labels;
    auto add = [&](std::vector<Label> &part, std::size_t count, Party party) {
        for (std::size_t i = 0; i < count; ++i) {
            const SystemLabel l = fresh(party);
            labels.push_back(l);
            part.push_back(l.id);
        }
    };
    add(out.a, profile.a, Party::Alice);
    add(out.b, profile.b, Party::Bob);
    add(out.c, profile.c, Party::Reference);
    std::vector<Label> purifier;
    add(purifier, hidden, Party::Eve);
    out.state = random_pure_state(std::move(labels), rng);
    out.e.emplace();
    for (const Label l : out.b) {
        if (rng.bernoulli(0.5)) {
            out.e->push_back(l);
        }
    }
    return out;
}

struct SlackStats {
    std::size_t samples = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double mean_slack = 0.0;
    std::size_t violations = 0;
};

inline SlackStats summarize_slacks(std::span<const double> slacks, double tolerance = kSlackTolerance) {
    SlackStats s;
    s.samples = slacks.size();
    double sum = 0.0;
    for (const double x : slacks) {
        s.min_slack = std::min(s.min_slack, x);
        sum += x;
        if (!(x >= -tolerance)) {
            ++s.violations;
        }
    }
    s.mean_slack = slacks.empty() ? 0.0 : sum / static_cast<double>(slacks.size());
    return s;
}

inline nlohmann::ordered_json to_json(const SlackStats &s) {
    nlohmann::ordered_json j;
    j["samples"] = s.samples;
    j["min_slack"] = s.samples ? s.min_slack : 0.0;
    j["mean_slack"] = s.mean_slack;
    j["violations"] = s.violations;
    return j;
}

namespace detail {

inline std::uint64_t sweep_key(std::uint64_t seed, std::uint64_t salt) { return mix64(seed ^ mix64(salt)); }

} // namespace detail

/// Slacks of all four inequalities over `samples` random states with the
/// given profile. Odd-numbered samples carry one hidden purifier qubit.
inline std::array<SlackStats, 4> lemma1_sweep(PartProfile profile, std::size_t samples, std::uint64_t seed) {
    std::vector<std::array<double, 4>> slacks(samples);
    const std::uint64_t key = detail::sweep_key(seed, 0x100 + profile.a * 16 + profile.b * 4 + profile.c);
    parallel_for(samples, [&](std::size_t i) {
        CounterRng rng(key, stream_index(i, StreamPurpose::Sweep));
        const TripartiteSample sample = random_tripartite_sample(profile, i % 2, rng);
        for (std::size_t w = 0; w < 4; ++w) {
            slacks[i][w] = lemma1_slack(sample, kLemma1Parts[w]);
        }
    });
    std::array<SlackStats, 4> out;
    std::vector<double> column(samples);
    for (std::size_t w = 0; w < 4; ++w) {
        for (std::size_t i = 0; i < samples; ++i) {
            column[i] = slacks[i][w];
        }
        out[w] = summarize_slacks(column);
    }
    return out;
}

/// 2Dm - 2D log2(2D), the continuity bound on |H(rho) - H(sigma)| for
/// m-qubit states at trace distance D <= 1/(2e).
inline double fannes_bound(double distance, std::size_t qubits) {
    if (distance <= 0.0) {
        return 0.0;
    }
    return 2.0 * distance * static_cast<double>(qubits) - 2.0 * distance * std::log2(2.0 * distance);
}

inline constexpr double kFannesWindow = 1.0 / (2.0 * std::numbers::e);

inline double fannes_gap(const DensityOp &rho, const DensityOp &sigma) {
    const double d = trace_distance(rho, sigma);
    if (d > kFannesWindow) {
        fail(ErrorCode::OutOfValidityWindow,
             "trace distance " + std::to_string(d) + " exceeds 1/(2e); the continuity bound does not apply");
    }
    return fannes_bound(d, rho.num_qubits()) - std::abs(entropy(rho) - entropy(sigma));
}

/// sqrt(1 - F^2) - D.
inline double fidelity_distance_gap(const DensityOp &rho, const DensityOp &sigma) {
    const double f = fidelity(rho, sigma);
    const double d = trace_distance(rho, sigma);
    return std::sqrt(std::max(0.0, 1.0 - f * f)) - d;
}

/// Marginal on `labels` of a random pure state with `hidden` extra qubits.
inline DensityOp random_density(const std::vector<Label> &labels, std::size_t hidden, CounterRng &rng) {
    std::vector<SystemLabel> all;
    for (const Label l : labels) {
        all.push_back(SystemLabel{l, Party::Alice});
    }
    for (std::size_t i = 0; i < hidden; ++i) {
        all.push_back(fresh(Party::Eve));
    }
    return partial_trace(random_pure_state(std::move(all), rng), labels);
}

/// Random 2-qubit rho (full rank) against sigma = (1-t) rho + t tau with tau
/// random and t < 0.05, which keeps D well inside the validity window.
inline SlackStats fannes_sweep(std::size_t samples, std::uint64_t seed) {
    std::vector<double> gaps(samples);
    const std::uint64_t key = detail::sweep_key(seed, 0x200);
    parallel_for(samples, [&](std::size_t i) {
        CounterRng rng(key, stream_index(i, StreamPurpose::Sweep));
        const std::vector<Label> labels{fresh_label(), fresh_label()};
        const DensityOp rho = random_density(labels, 2, rng);
        const DensityOp tau = random_density(labels, i % 3, rng);
        const double t = 0.05 * rng.uniform();
        const DensityOp sigma(labels, (1.0 - t) * rho.matrix() + t * tau.matrix());
        gaps[i] = fannes_gap(rho, sigma);
    });
    return summarize_slacks(gaps);
}

/// Random pairs on one or two qubits, from pure up to full rank.
inline SlackStats distance_sweep(std::size_t samples, std::uint64_t seed) {
    std::vector<double> gaps(samples);
    const std::uint64_t key = detail::sweep_key(seed, 0x300);
    parallel_for(samples, [&](std::size_t i) {
        CounterRng rng(key, stream_index(i, StreamPurpose::Sweep));
        std::vector<Label> labels{fresh_label()};
        if (i % 2) {
            labels.push_back(fresh_label());
        }
        const DensityOp rho = random_density(labels, i % 3, rng);
        const DensityOp sigma = random_density(labels, (i / 3) % 3, rng);
        gaps[i] = fidelity_distance_gap(rho, sigma);
    });
    return summarize_slacks(gaps);
}

struct Theorem1Report {
    /// Channel uses in the trace.
    std::size_t n = 0;
    std::size_t m = 0;
    double fidelity = 0.0;
    double epsilon = 1.0;
    double sum_delivered = 0.0;
    double sum_erased = 0.0;
    /// 2m - 2(2 sqrt2 m sqrt(eps) + 1)
    double bound_delivered = 0.0;
    /// n - m + 4(2 sqrt2 m sqrt(eps) + 1)
    double bound_erased = 0.0;
    bool holds_delivered = false;
    bool holds_erased = false;
    /// I(S_i; B_{i-1} R) per use, with the outcome of that use.
    std::vector<double> info;
    std::vector<bool> delivered;
};

/// Evaluates both information sums on a snapshot-recorded trace whose runs
/// sent m halves of |Phi> pairs held against reference registers.
inline Theorem1Report theorem1_audit(const ProtocolTrace &trace, std::size_t m) {
    if (trace.snapshots.empty() || !trace.final_state) {
        fail(ErrorCode::SnapshotsMissing, "audit needs a trace recorded with snapshots");
    }
    if (m < 1 || trace.reference.size() != m || trace.decoded_register.size() != m) {
        fail(ErrorCode::InvalidArgument, "trace does not carry m reference/output register pairs");
    }
    Theorem1Report r;
    r.n = trace.snapshots.size();
    r.m = m;
    for (const Snapshot &snap : trace.snapshots) {
        if (snap.state.num_qubits() > kMaxQubits) {
            fail(ErrorCode::SizeCap, "snapshot too large to audit");
        }
        std::vector<Label> context = snap.bob_before;
        for (const Label ref : trace.reference) {
            if (snap.state.contains(ref)) {
                context.push_back(ref);
            }
        }
        const double info = mutual_information(snap.state, std::span<const Label>(&snap.sent, 1), context);
        r.info.push_back(info);
        r.delivered.push_back(snap.delivered);
        (snap.delivered ? r.sum_delivered : r.sum_erased) += info;
    }

    std::vector<Label> pair_labels;
    LabeledState target;
    for (std::size_t t = 0; t < m; ++t) {
        const Label ref = trace.reference[t];
        const Label out = trace.decoded_register[t];
        pair_labels.push_back(ref);
        pair_labels.push_back(out);
        target = tensor(target, make_bell(SystemLabel{ref, Party::Reference}, SystemLabel{out, Party::Bob}));
    }
    r.fidelity = fidelity_with_pure(partial_trace(*trace.final_state, pair_labels), target);
    for (const Label out : trace.decoded_register) {
        if (trace.final_state->party(out) != Party::Bob) {
            r.fidelity = 0.0;
        }
    }
    r.epsilon = std::max(0.0, 1.0 - r.fidelity);

    const double md = static_cast<double>(m);
    const double term = 2.0 * std::numbers::sqrt2 * md * std::sqrt(r.epsilon) + 1.0;
    r.bound_delivered = 2.0 * md - 2.0 * term;
    r.bound_erased = static_cast<double>(r.n) - md + 4.0 * term;
    r.holds_delivered = r.sum_delivered >= r.bound_delivered - kSlackTolerance;
    r.holds_erased = r.sum_erased <= r.bound_erased + kSlackTolerance;
    return r;
}

inline nlohmann::ordered_json to_json(const Theorem1Report &r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["fidelity"] = r.fidelity;
    j["epsilon"] = r.epsilon;
    j["sum_delivered"] = r.sum_delivered;
    j["bound_delivered"] = r.bound_delivered;
    j["holds_delivered"] = r.holds_delivered;
    j["sum_erased"] = r.sum_erased;
    j["bound_erased"] = r.bound_erased;
    j["holds_erased"] = r.holds_erased;
    j["info"] = r.info;
    return j;
}

/// Session settings for audits: nothing retired, every use snapshotted,
/// Bob's corrections in their literal order, no ebits on loan.
inline SessionOptions audit_options() {
    SessionOptions o;
    o.retire_registers = false;
    o.record_snapshots = true;
    o.auto_provision = true;
    o.eager_eve_correction = false;
    o.verify_bookkeeping = true;
    o.catalyst_ebits = 0;
    return o;
}

/// Sends the Alice halves of m fresh |Phi>_{R,M} pairs with the given
/// protocol. `script` forces the first channel outcomes (true = erased).
inline ProtocolTrace audited_transfer(ProtocolKind kind, double p, std::size_t m, std::uint64_t seed,
                                      const std::vector<bool> &script = {}) {
    ChannelConfig cfg;
    cfg.p = p;
    cfg.seed = seed;
    Session session(cfg, audit_options());
    session.channel().script(script);
    for (std::size_t t = 0; t < m; ++t) {
        const SystemLabel ref = fresh(Party::Reference);
        const SystemLabel msg = fresh(Party::Alice);
        session.adopt(make_bell(ref, msg));
        session.trace().reference.push_back(ref.id);
        send_message(session, kind, msg.id);
    }
    return std::move(session.trace());
}

/// Per-use information values of audited p = 0 transfers, clamped to [0, 2]
/// against rounding, for driving the martingale with realistic steps.
inline std::vector<double> harvest_information(std::uint64_t seed) {
    std::vector<double> values;
    for (const ProtocolKind kind : {ProtocolKind::Sub1, ProtocolKind::Sub2}) {
        const Theorem1Report r = theorem1_audit(audited_transfer(kind, 0.0, 1, seed), 1);
        for (const double v : r.info) {
            values.push_back(std::clamp(v, 0.0, 2.0));
        }
    }
    return values;
}

struct Theorem1SuiteStats {
    std::size_t samples = 0;
    std::size_t audited = 0;
    /// Sample paths whose state outgrew the qubit cap.
    std::size_t skipped = 0;
    /// Sum_B minus its lower bound.
    SlackStats delivered;
    /// Upper bound minus Sum_E.
    SlackStats erased;
};

/// Toy audits over Sub1, Sub2 and direct sends with m = 1 at
/// p in {0, 1/4, 1/2}. Paths exceeding the qubit cap are counted as skipped.
inline Theorem1SuiteStats theorem1_suite(std::size_t samples, std::uint64_t seed) {
    constexpr std::array<ProtocolKind, 3> kinds{ProtocolKind::Sub1, ProtocolKind::Sub2, ProtocolKind::Direct};
    constexpr std::array<double, 3> ps{0.0, 0.25, 0.5};
    std::vector<std::optional<std::pair<double, double>>> slack(samples);
    const std::uint64_t key = detail::sweep_key(seed, 0x400);
    parallel_for(samples, [&](std::size_t i) {
        const ProtocolKind kind = kinds[i % 3];
        const double p = ps[(i / 3) % 3];
        try {
            const ProtocolTrace trace = audited_transfer(kind, p, 1, detail::mix64(key + i));
            const Theorem1Report r = theorem1_audit(trace, 1);
            slack[i] = std::pair{r.sum_delivered - r.bound_delivered, r.bound_erased - r.sum_erased};
        } catch (const Error &e) {
            if (e.code() != ErrorCode::SizeCap) {
                throw;
            }
        }
    });
    Theorem1SuiteStats out;
    out.samples = samples;
    std::vector<double> d, e;
    for (const auto &s : slack) {
        if (!s) {
            ++out.skipped;
            continue;
        }
        ++out.audited;
        d.push_back(s->first);
        e.push_back(s->second);
    }
    out.delivered = summarize_slacks(d);
    out.erased = summarize_slacks(e);
    return out;
}

} // namespace erasurelab
