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
 * The quantum erasure channel in its isometric-extension form.
 *
 * A use of the channel either hands the register to Bob or swaps it into the
 * environment. In both cases the joint amplitudes are unchanged: only the
 * owning party flips. The erasure flag travels back to Alice classically, so
 * both ends learn the outcome immediately.
 */

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "erasurelab/errors.hpp"
#include "erasurelab/rng.hpp"
#include "erasurelab/state.hpp"

namespace erasurelab {

struct ChannelConfig {
    double p = 0.0;
    std::size_t max_retransmits = 64;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(p >= 0.0 && p <= 1.0)) {
            fail(ErrorCode::InvalidProbability, "erasure probability must lie in [0, 1]");
        }
        if (max_retransmits < 1) {
            fail(ErrorCode::InvalidArgument, "max_retransmits must be at least 1");
        }
    }
};

namespace detail {

inline std::string trim(const std::string &s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string &key, const std::string &text) {
    T value{};
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        fail(ErrorCode::InvalidArgument, "cannot parse value '" + text + "' for key '" + key + "'");
    }
    return value;
}

} // namespace detail

/// `key = value` lines in file order. '#' starts a comment; ':' also works.
inline std::vector<std::pair<std::string, std::string>> parse_config_entries(std::istream &in) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find_first_of("=:");
        if (eq == std::string::npos) {
            fail(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + " has no '='");
        }
        entries.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return entries;
}

/// Applies entries with keys p, max_retransmits and seed on top of `cfg`.
inline ChannelConfig apply_config_entries(const std::vector<std::pair<std::string, std::string>> &entries,
                                          ChannelConfig cfg = {}) {
    for (const auto &[key, value] : entries) {
        if (key == "p") {
            cfg.p = detail::parse_number<double>(key, value);
        } else if (key == "max_retransmits") {
            cfg.max_retransmits = detail::parse_number<std::size_t>(key, value);
        } else if (key == "seed") {
            cfg.seed = detail::parse_number<std::uint64_t>(key, value);
        } else {
            fail(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline ChannelConfig parse_channel_config(std::istream &in, ChannelConfig cfg = {}) {
    return apply_config_entries(parse_config_entries(in), cfg);
}

inline ChannelConfig load_channel_config(const std::string &path, ChannelConfig cfg = {}) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open config file " + path);
    }
    return parse_channel_config(in, cfg);
}

enum class UsePurpose : std::uint8_t { EbitGeneration, Message };

struct TransmitOutcome {
    bool delivered = false;
    /// The transmitted register with its new owner (Bob or Eve).
    SystemLabel recipient_label;
    std::size_t use_index = 0;
    UsePurpose purpose = UsePurpose::Message;
};

/// 1/(1-p): mean number of uses until one delivery.
inline double expected_uses_per_success(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        fail(ErrorCode::InvalidProbability, "erasure probability must lie in [0, 1]");
    }
    if (p == 1.0) {
        fail(ErrorCode::PEqualsOne, "no delivery is possible at p = 1");
    }
    return 1.0 / (1.0 - p);
}

/// Probability that a register is erased on every one of `max_retransmits`
/// attempts, i.e. the mass cut off by the retry cap.
inline double truncated_tail_probability(double p, std::size_t max_retransmits) {
    return std::pow(p, static_cast<double>(max_retransmits));
}

class ErasureChannel {
public:
    explicit ErasureChannel(ChannelConfig cfg, std::uint64_t run_index = 0)
        : cfg_(cfg), rng_(cfg.seed, stream_index(run_index, StreamPurpose::Channel)) {
        cfg_.validate();
    }

    const ChannelConfig &config() const noexcept { return cfg_; }
    std::size_t uses() const noexcept { return uses_; }

    /// Forces the next outcomes (true = erased) ahead of random draws.
    void script(const std::vector<bool> &erasures) { scripted_.insert(scripted_.end(), erasures.begin(), erasures.end()); }

    void set_budget(std::optional<std::size_t> budget) noexcept { budget_ = budget; }

    std::pair<LabeledState, TransmitOutcome> transmit(LabeledState s, Label qubit,
                                                      UsePurpose purpose = UsePurpose::Message) {
        if (s.party(qubit) != Party::Alice) {
            fail(ErrorCode::NotOwnedByAlice, "register " + std::to_string(qubit.value) + " is not Alice's");
        }
        if (budget_ && uses_ >= *budget_) {
            fail(ErrorCode::BudgetExhausted, "channel-use budget of " + std::to_string(*budget_) + " spent");
        }
        const bool erased = draw_erasure();
        const Party to = erased ? Party::Eve : Party::Bob;
        TransmitOutcome outcome{!erased, SystemLabel{qubit, to}, uses_, purpose};
        ++uses_;
        return {transfer(std::move(s), qubit, to), outcome};
    }

private:
    bool draw_erasure() {
        if (!scripted_.empty()) {
            const bool e = scripted_.front();
            scripted_.pop_front();
            return e;
        }
        return rng_.bernoulli(cfg_.p);
    }

    ChannelConfig cfg_;
    CounterRng rng_;
    std::deque<bool> scripted_;
    std::optional<std::size_t> budget_;
    std::size_t uses_ = 0;
};

} // namespace erasurelab
