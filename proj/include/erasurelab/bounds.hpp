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
 * Closed-form bounds on the quantum capacity of the erasure channel with
 * back classical communication, and the martingale experiment behind the
 * upper bound.
 *
 * The martingale: each channel use i carries some information I_i = I(S_i;
 * B_{i-1}R) in [0, 2]. Delivered uses add (p/2) I_i, erased ones subtract
 * ((1-p)/2) I_i, so the expected increment is zero and |X_i| <= 1. Azuma's
 * inequality then bounds Pr[|Y_n| >= kn] by exp(-k^2 n / 2).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "erasurelab/errors.hpp"
#include "erasurelab/io.hpp"
#include "erasurelab/parallel.hpp"
#include "erasurelab/rng.hpp"

namespace erasurelab {

namespace detail {
inline void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        fail(ErrorCode::InvalidProbability, "erasure probability must lie in [0, 1]");
    }
}
} // namespace detail

/// Best of the two subprotocols, with ebits bought from the channel.
inline double new_lower_bound(double p) {
    detail::require_probability(p);
    if (p <= 0.5) {
        return (1.0 - p) * (1.0 - p);
    }
    return (1.0 - p) / (1.0 + 2.0 * p);
}

inline double new_upper_bound(double p) {
    detail::require_probability(p);
    return (1.0 - p) / (1.0 + p);
}

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
};

/// Lower: one-way hashing (1-2p) up to p = 2/5, teleportation over channel
/// generated ebits ((1-p)/3) beyond. Upper: the two-way capacity 1-p.
inline BoundPair prior_bounds(double p) {
    detail::require_probability(p);
    const double lower = p <= 0.4 ? 1.0 - 2.0 * p : (1.0 - p) / 3.0;
    return {lower, 1.0 - p};
}

struct CapacityReference {
    double q_unassisted = 0.0;
    double q2 = 0.0;
};

inline CapacityReference capacity_reference(double p) {
    detail::require_probability(p);
    return {std::max(0.0, 1.0 - 2.0 * p), 1.0 - p};
}

struct BoundCurvePoint {
    double p = 0.0;
    double q_unassisted = 0.0;
    double q2 = 0.0;
    double prior_lower = 0.0;
    double prior_upper = 0.0;
    double new_lower = 0.0;
    double new_upper = 0.0;
};

inline BoundCurvePoint bound_curve_point(double p) {
    const CapacityReference ref = capacity_reference(p);
    const BoundPair prior = prior_bounds(p);
    return {p, ref.q_unassisted, ref.q2, prior.lower, prior.upper, new_lower_bound(p), new_upper_bound(p)};
}

/// `points` evenly spaced values from 0 to 1 inclusive.
inline std::vector<double> uniform_grid(std::size_t points) {
    if (points < 2) {
        fail(ErrorCode::InvalidArgument, "a grid needs at least two points");
    }
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

inline std::vector<BoundCurvePoint> figure1_data(const std::vector<double> &grid) {
    std::vector<BoundCurvePoint> out;
    out.reserve(grid.size());
    for (const double p : grid) {
        if (!(p >= 0.0 && p <= 1.0)) {
            fail(ErrorCode::GridOutOfRange, "grid point " + format_number(p) + " outside [0, 1]");
        }
        out.push_back(bound_curve_point(p));
    }
    return out;
}

inline std::string figure1_csv_header() { return "p,q_unassisted,q2,prior_lower,prior_upper,new_lower,new_upper"; }

inline void write_figure1_csv(std::ostream &out, const std::vector<BoundCurvePoint> &points) {
    out << figure1_csv_header() << '\n';
    for (const auto &pt : points) {
        out << csv_join({format_number(pt.p), format_number(pt.q_unassisted), format_number(pt.q2),
                         format_number(pt.prior_lower), format_number(pt.prior_upper), format_number(pt.new_lower),
                         format_number(pt.new_upper)})
            << '\n';
    }
}

/// q_unassisted <= prior_lower <= new_lower <= new_upper <= prior_upper = q2.
inline bool curves_nested(const BoundCurvePoint &pt, double tolerance = 1e-12) {
    return pt.q_unassisted <= pt.prior_lower + tolerance && pt.prior_lower <= pt.new_lower + tolerance &&
           pt.new_lower <= pt.new_upper + tolerance && pt.new_upper <= pt.prior_upper + tolerance &&
           std::abs(pt.prior_upper - pt.q2) <= tolerance;
}

struct SeparationReport {
    std::size_t points_checked = 0;
    /// min over interior points of q2 - new_upper = p(1-p)/(1+p).
    double min_gap = 0.0;
    double argmin_p = 0.0;
    bool strict = true;
};

/// Checks new_upper < q2 at every grid point strictly inside (0, 1); the
/// endpoints, where both curves meet, are skipped.
inline SeparationReport separation_certificate(const std::vector<double> &grid) {
    SeparationReport r;
    r.min_gap = std::numeric_limits<double>::infinity();
    for (const double p : grid) {
        if (!(p >= 0.0 && p <= 1.0)) {
            fail(ErrorCode::GridOutOfRange, "grid point " + format_number(p) + " outside [0, 1]");
        }
        if (p == 0.0 || p == 1.0) {
            continue;
        }
        const double gap = capacity_reference(p).q2 - new_upper_bound(p);
        ++r.points_checked;
        if (!(gap > 0.0)) {
            r.strict = false;
        }
        if (gap < r.min_gap) {
            r.min_gap = gap;
            r.argmin_p = p;
        }
    }
    if (r.points_checked == 0) {
        r.min_gap = 0.0;
    }
    return r;
}

/// Per-step information I_i in [0, 2].
class InfoSchedule {
public:
    static InfoSchedule constant(double value) { return InfoSchedule({value}); }

    /// Values taken from audited runs, cycled when the run is longer.
    static InfoSchedule harvested(std::vector<double> values) {
        if (values.empty()) {
            fail(ErrorCode::InvalidArgument, "harvested schedule is empty");
        }
        return InfoSchedule(std::move(values));
    }

    double at(std::size_t step) const {
        const double v = values_[step % values_.size()];
        if (!(v >= 0.0 && v <= 2.0)) {
            fail(ErrorCode::InfoOutOfRange, "information value " + format_number(v) + " outside [0, 2]");
        }
        return v;
    }

    const std::vector<double> &values() const noexcept { return values_; }

private:
    explicit InfoSchedule(std::vector<double> values) : values_(std::move(values)) {}
    std::vector<double> values_;
};

struct MartingaleTrace {
    double p = 0.0;
    std::size_t n = 0;
    std::vector<double> increments;
    /// Y_0 = 0, ..., Y_n.
    std::vector<double> partial_sums;

    double final_value() const { return partial_sums.back(); }
};

/// (delivered, erased) increments for information I at erasure probability p.
inline std::pair<double, double> martingale_increments(double p, double info) {
    return {0.5 * p * info, -0.5 * (1.0 - p) * info};
}

inline MartingaleTrace martingale_run(double p, std::size_t n, const InfoSchedule &schedule, CounterRng &rng) {
    detail::require_probability(p);
    MartingaleTrace t;
    t.p = p;
    t.n = n;
    t.increments.reserve(n);
    t.partial_sums.reserve(n + 1);
    t.partial_sums.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [up, down] = martingale_increments(p, schedule.at(i));
        const double x = rng.bernoulli(p) ? down : up;
        t.increments.push_back(x);
        t.partial_sums.push_back(t.partial_sums.back() + x);
    }
    return t;
}

struct AzumaReport {
    double p = 0.0;
    std::size_t n = 0;
    double k = 0.0;
    std::size_t trials = 0;
    double empirical_tail = 0.0;
    double azuma_bound = 0.0;
    /// Binomial standard deviation of the tail estimate at the bound.
    double mc_sigma = 0.0;
    bool pass = false;
    double mean_final = 0.0;
    double mean_standard_error = 0.0;
    bool mean_within_5se = false;
    double max_abs_increment = 0.0;
    /// max over steps of |(1-p) up + p down|; zero up to rounding.
    double max_conditional_mean = 0.0;

    bool all_pass() const { return pass && mean_within_5se && max_abs_increment <= 1.0 && max_conditional_mean < 1e-12; }
};

/// Summary of one trace; enough for the tail check without keeping steps.
struct TrialSummary {
    double final_value = 0.0;
    double max_abs_increment = 0.0;
};

inline AzumaReport azuma_tail_check(const std::vector<TrialSummary> &trials, double p, std::size_t n, double k) {
    if (trials.size() < 1000) {
        fail(ErrorCode::TooFewTraces, "the tail check needs at least 1000 traces");
    }
    if (!(k > 0.0)) {
        fail(ErrorCode::InvalidArgument, "k must be positive");
    }
    AzumaReport r;
    r.p = p;
    r.n = n;
    r.k = k;
    r.trials = trials.size();
    const double T = static_cast<double>(trials.size());
    const double threshold = k * static_cast<double>(n);
    std::size_t hits = 0;
    double sum = 0.0, sum_sq = 0.0;
    for (const auto &t : trials) {
        if (std::abs(t.final_value) >= threshold) {
            ++hits;
        }
        sum += t.final_value;
        sum_sq += t.final_value * t.final_value;
        r.max_abs_increment = std::max(r.max_abs_increment, t.max_abs_increment);
    }
    r.empirical_tail = static_cast<double>(hits) / T;
    r.azuma_bound = std::exp(-0.5 * k * k * static_cast<double>(n));
    const double b = std::min(r.azuma_bound, 1.0);
    r.mc_sigma = std::sqrt(b * (1.0 - b) / T);
    r.pass = r.empirical_tail <= r.azuma_bound + 3.0 * r.mc_sigma;
    r.mean_final = sum / T;
    const double var = std::max(0.0, (sum_sq - sum * sum / T) / (T - 1.0));
    r.mean_standard_error = std::sqrt(var / T);
    r.mean_within_5se = std::abs(r.mean_final) <= 5.0 * r.mean_standard_error + 1e-12;
    return r;
}

inline AzumaReport azuma_tail_check(const std::vector<MartingaleTrace> &traces, double k) {
    if (traces.size() < 1000) {
        fail(ErrorCode::TooFewTraces, "the tail check needs at least 1000 traces");
    }
    std::vector<TrialSummary> summaries;
    summaries.reserve(traces.size());
    for (const auto &t : traces) {
        if (t.n != traces.front().n) {
            fail(ErrorCode::InvalidArgument, "traces must share n");
        }
        TrialSummary s{t.final_value(), 0.0};
        for (const double x : t.increments) {
            s.max_abs_increment = std::max(s.max_abs_increment, std::abs(x));
        }
        summaries.push_back(s);
    }
    return azuma_tail_check(summaries, traces.front().p, traces.front().n, k);
}

/// Runs `trials` independent martingales (one random stream each) and
/// checks the Azuma tail at k.
inline AzumaReport martingale_experiment(double p, std::size_t n, double k, std::size_t trials,
                                         const InfoSchedule &schedule, std::uint64_t seed) {
    detail::require_probability(p);
    if (trials < 1000) {
        fail(ErrorCode::TooFewTraces, "the tail check needs at least 1000 traces");
    }
    std::vector<TrialSummary> summaries(trials);
    parallel_for(trials, [&](std::size_t i) {
        CounterRng rng(seed, stream_index(i, StreamPurpose::Martingale));
        const MartingaleTrace t = martingale_run(p, n, schedule, rng);
        TrialSummary s{t.final_value(), 0.0};
        for (const double x : t.increments) {
            s.max_abs_increment = std::max(s.max_abs_increment, std::abs(x));
        }
        summaries[i] = s;
    });
    AzumaReport r = azuma_tail_check(summaries, p, n, k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [up, down] = martingale_increments(p, schedule.at(i));
        r.max_conditional_mean = std::max(r.max_conditional_mean, std::abs((1.0 - p) * up + p * down));
    }
    return r;
}

inline nlohmann::ordered_json to_json(const AzumaReport &r) {
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["n"] = r.n;
    j["k"] = r.k;
    j["trials"] = r.trials;
    j["empirical_tail"] = r.empirical_tail;
    j["azuma_bound"] = r.azuma_bound;
    j["mc_sigma"] = r.mc_sigma;
    j["pass"] = r.pass;
    j["mean_final"] = r.mean_final;
    j["mean_standard_error"] = r.mean_standard_error;
    j["mean_within_5se"] = r.mean_within_5se;
    j["max_abs_increment"] = r.max_abs_increment;
    j["max_conditional_mean"] = r.max_conditional_mean;
    return j;
}

} // namespace erasurelab
