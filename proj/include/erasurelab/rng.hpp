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
 * Counter-based random streams.
 *
 * Each stream is keyed by (seed, stream index) and produces the value
 * mix(key + counter * gamma), so any draw is a pure function of the key and
 * its position. Independent Monte Carlo runs take distinct stream indices and
 * can execute in any order without changing their outputs. Floating-point
 * conversions are done by hand rather than through <random> distributions,
 * whose algorithms are implementation-defined.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace erasurelab {

namespace detail {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Stream identifiers used across the library so that independent consumers
/// never share draws.
enum class StreamPurpose : std::uint64_t {
    Channel = 0,
    Messages = 1,
    Sweep = 2,
    Martingale = 3,
};

constexpr std::uint64_t stream_index(std::uint64_t run_index, StreamPurpose purpose) noexcept {
    return run_index * 4 + static_cast<std::uint64_t>(purpose);
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(detail::mix64(seed ^ detail::mix64(stream + detail::kGoldenGamma))) {}

    std::uint64_t next_u64() noexcept {
        ++counter_;
        return detail::mix64(key_ + counter_ * detail::kGoldenGamma);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Standard normal via Box-Muller; both outputs of a pair are used.
    double gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 <= 0.0) {
            u1 = 0x1.0p-53;
        }
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace erasurelab
