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

#include <sstream>

#include "catch_amalgamated.hpp"
#include "erasurelab/channel.hpp"
#include "test_util.hpp"

using namespace erasurelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<bool> outcomes(ErasureChannel &ch, std::size_t n) {
    std::vector<bool> out;
    for (std::size_t i = 0; i < n; ++i) {
        const SystemLabel q = fresh(Party::Alice);
        out.push_back(ch.transmit(basis_state({q}, 0), q.id).second.delivered);
    }
    return out;
}

} // namespace

TEST_CASE("delivery hands the register to Bob, erasure to Eve", "[channel]") {
    const SystemLabel m = fresh(Party::Alice);
    const SystemLabel b = fresh(Party::Bob);
    const LabeledState s = tensor(prepare_message(1.2, 0.3, m), basis_state({b}, 1));

    ChannelConfig perfect;
    ErasureChannel ch0(perfect);
    auto [delivered, out0] = ch0.transmit(s, m.id);
    CHECK(out0.delivered);
    CHECK(delivered.party(m.id) == Party::Bob);
    CHECK(out0.recipient_label.party == Party::Bob);
    CHECK(out0.use_index == 0);
    CHECK_THAT(pure_fidelity(delivered, s), WithinAbs(1.0, 1e-15));

    ChannelConfig broken;
    broken.p = 1.0;
    ErasureChannel ch1(broken);
    auto [erased, out1] = ch1.transmit(s, m.id);
    CHECK_FALSE(out1.delivered);
    CHECK(erased.party(m.id) == Party::Eve);
    CHECK_THAT(pure_fidelity(erased, s), WithinAbs(1.0, 1e-15));
    CHECK(ch1.uses() == 1);
}

TEST_CASE("only Alice's registers can be sent", "[channel]") {
    ErasureChannel ch(ChannelConfig{});
    const SystemLabel b = fresh(Party::Bob);
    CHECK(code_of([&] { ch.transmit(basis_state({b}, 0), b.id); }) == ErrorCode::NotOwnedByAlice);
    CHECK(ch.uses() == 0);
}

TEST_CASE("budget and scripted outcomes", "[channel]") {
    ChannelConfig cfg;
    cfg.p = 0.5;
    ErasureChannel ch(cfg);
    ch.script({true, true, false});
    CHECK(outcomes(ch, 3) == std::vector<bool>{false, false, true});
    ch.set_budget(4);
    outcomes(ch, 1);
    CHECK(code_of([&] { outcomes(ch, 1); }) == ErrorCode::BudgetExhausted);
}

TEST_CASE("erasure frequency matches p", "[channel]") {
    for (const double p : {0.1, 0.5, 0.75}) {
        ChannelConfig cfg;
        cfg.p = p;
        cfg.seed = 5;
        ErasureChannel ch(cfg);
        const std::size_t n = 20000;
        const auto got = outcomes(ch, n);
        const double erased = static_cast<double>(std::count(got.begin(), got.end(), false)) / n;
        CHECK(std::abs(erased - p) < 5.0 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("outcome streams depend only on seed and run index", "[channel]") {
    ChannelConfig cfg;
    cfg.p = 0.5;
    cfg.seed = 123;
    ErasureChannel a(cfg), b(cfg), c(cfg, 1);
    const auto x = outcomes(a, 200);
    CHECK(x == outcomes(b, 200));
    CHECK(x != outcomes(c, 200));
    cfg.seed = 124;
    ErasureChannel d(cfg);
    CHECK(x != outcomes(d, 200));
}

TEST_CASE("configuration parsing", "[channel]") {
    std::istringstream good("# channel\np = 0.25\nmax_retransmits: 10  # cap\n\nseed=42\n");
    const ChannelConfig cfg = parse_channel_config(good);
    CHECK(cfg.p == 0.25);
    CHECK(cfg.max_retransmits == 10);
    CHECK(cfg.seed == 42);

    std::istringstream unknown("q = 1\n");
    CHECK(code_of([&] { parse_channel_config(unknown); }) == ErrorCode::InvalidArgument);
    std::istringstream bad_number("p = 0.2x\n");
    CHECK(code_of([&] { parse_channel_config(bad_number); }) == ErrorCode::InvalidArgument);
    std::istringstream out_of_range("p = 1.5\n");
    CHECK(code_of([&] { parse_channel_config(out_of_range); }) == ErrorCode::InvalidProbability);
    std::istringstream no_eq("p 0.5\n");
    CHECK(code_of([&] { parse_channel_config(no_eq); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { load_channel_config("/nonexistent/erasurelab.cfg"); }) == ErrorCode::Io);
}

TEST_CASE("retry statistics", "[channel]") {
    CHECK(expected_uses_per_success(0.0) == 1.0);
    CHECK_THAT(expected_uses_per_success(0.75), WithinRel(4.0, 1e-15));
    CHECK(code_of([] { expected_uses_per_success(1.0); }) == ErrorCode::PEqualsOne);
    CHECK(code_of([] { expected_uses_per_success(-0.1); }) == ErrorCode::InvalidProbability);
    // The cap of 64 attempts cuts off 0.9^64 of the mass at p = 0.9.
    CHECK_THAT(truncated_tail_probability(0.9, 64), WithinRel(std::pow(0.9, 64), 1e-12));
    CHECK(truncated_tail_probability(0.9, 64) > 1e-3);
    CHECK(truncated_tail_probability(0.5, 64) < 1e-19);
    CHECK(code_of([] { ErasureChannel(ChannelConfig{2.0, 64, 0}); }) == ErrorCode::InvalidProbability);
}
