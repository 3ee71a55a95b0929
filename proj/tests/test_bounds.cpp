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
#include "erasurelab/bounds.hpp"
#include "test_util.hpp"

using namespace erasurelab;
using Catch::Matchers::WithinAbs;

TEST_CASE("bound values at reference points", "[bounds]") {
    CHECK(new_lower_bound(0.0) == 1.0);
    CHECK(new_lower_bound(0.5) == 0.25);
    CHECK_THAT(new_lower_bound(0.75), WithinAbs(0.1, 1e-15));
    CHECK(new_upper_bound(0.0) == 1.0);
    CHECK_THAT(new_upper_bound(1.0 / 3.0), WithinAbs(0.5, 1e-15));
    CHECK(new_upper_bound(1.0) == 0.0);

    CHECK_THAT(prior_bounds(0.4).lower, WithinAbs(0.2, 1e-15));
    CHECK_THAT((1.0 - 0.4) / 3.0, WithinAbs(0.2, 1e-15));
    CHECK(prior_bounds(0.0).lower == 1.0);
    CHECK(prior_bounds(0.0).upper == 1.0);
    CHECK_THAT(prior_bounds(0.5).lower, WithinAbs(1.0 / 6.0, 1e-15));
    CHECK(prior_bounds(0.5).upper == 0.5);

    CHECK(capacity_reference(0.5).q_unassisted == 0.0);
    CHECK(capacity_reference(0.5).q2 == 0.5);
    CHECK(capacity_reference(0.25).q_unassisted == 0.5);
    CHECK(capacity_reference(0.25).q2 == 0.75);
    CHECK(capacity_reference(1.0).q2 == 0.0);

    CHECK(code_of([] { new_lower_bound(1.1); }) == ErrorCode::InvalidProbability);
}

TEST_CASE("both pieces of the new lower bound meet at one half", "[bounds]") {
    const double left = 0.25, right = (1 - 0.5) / (1 + 2 * 0.5);
    CHECK(left == right);
    CHECK(std::abs(new_lower_bound(0.5 - 1e-9) - new_lower_bound(0.5 + 1e-9)) < 1e-8);
}

TEST_CASE("curves are nested and monotone on the default grid", "[bounds]") {
    const auto grid = uniform_grid(1001);
    REQUIRE(grid.size() == 1001);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
    const auto data = figure1_data(grid);
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(curves_nested(data[i]));
        for (const double v : {data[i].q_unassisted, data[i].q2, data[i].prior_lower, data[i].prior_upper,
                               data[i].new_lower, data[i].new_upper}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        if (i) {
            CHECK(data[i].new_lower <= data[i - 1].new_lower);
            CHECK(data[i].new_upper <= data[i - 1].new_upper);
        }
    }
    const BoundCurvePoint at0 = data.front();
    for (const double v : {at0.q_unassisted, at0.q2, at0.prior_lower, at0.prior_upper, at0.new_lower, at0.new_upper}) {
        CHECK(v == 1.0);
    }
    CHECK(code_of([] { figure1_data({0.5, 1.5}); }) == ErrorCode::GridOutOfRange);
}

TEST_CASE("separation from the two-way capacity", "[bounds]") {
    const SeparationReport half = separation_certificate({0.5});
    CHECK_THAT(half.min_gap, WithinAbs(1.0 / 6.0, 1e-15));
    const SeparationReport r = separation_certificate(uniform_grid(101));
    CHECK(r.points_checked == 99);
    CHECK(r.strict);
    // Smallest gap p(1-p)/(1+p) on the grid sits next to an endpoint.
    const double p = 0.99;
    CHECK_THAT(r.min_gap, WithinAbs(p * (1 - p) / (1 + p), 1e-12));
    CHECK_THAT(r.argmin_p, WithinAbs(0.99, 1e-12));
    CHECK(code_of([] { separation_certificate({-0.1}); }) == ErrorCode::GridOutOfRange);
}

TEST_CASE("figure CSV layout", "[bounds]") {
    std::ostringstream out;
    write_figure1_csv(out, figure1_data(uniform_grid(1001)));
    std::istringstream in(out.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    REQUIRE(lines.size() == 1002);
    CHECK(lines[0] == "p,q_unassisted,q2,prior_lower,prior_upper,new_lower,new_upper");
    CHECK(lines[501] == "0.5,0,0.5,0.166666666667,0.5,0.25,0.333333333333");
    CHECK(lines[1] == "0,1,1,1,1,1,1");
}

TEST_CASE("martingale runs", "[bounds]") {
    CounterRng rng(1);
    const MartingaleTrace zero = martingale_run(0.5, 50, InfoSchedule::constant(0.0), rng);
    CHECK(zero.final_value() == 0.0);
    CHECK(zero.partial_sums.size() == 51);
    CHECK(zero.partial_sums.front() == 0.0);

    for (const double p : {0.1, 0.5, 0.9}) {
        const MartingaleTrace t = martingale_run(p, 200, InfoSchedule::constant(2.0), rng);
        for (std::size_t i = 0; i < t.increments.size(); ++i) {
            CHECK(std::abs(t.increments[i]) <= 1.0);
            CHECK_THAT(t.partial_sums[i + 1] - t.partial_sums[i], WithinAbs(t.increments[i], 1e-12));
        }
        CHECK(std::abs(t.final_value()) <= 200.0);
    }
    // E[X] = (1-p)(p/2)I - p((1-p)/2)I = 0.
    const auto [up, down] = martingale_increments(0.3, 1.5);
    CHECK_THAT(0.7 * up + 0.3 * down, WithinAbs(0.0, 1e-16));

    CHECK(code_of([&] { martingale_run(0.5, 3, InfoSchedule::constant(2.5), rng); }) == ErrorCode::InfoOutOfRange);
    CHECK(code_of([] { InfoSchedule::harvested({}); }) == ErrorCode::InvalidArgument);
    const InfoSchedule h = InfoSchedule::harvested({0.5, 1.5});
    CHECK(h.at(0) == 0.5);
    CHECK(h.at(3) == 1.5);
}

TEST_CASE("Azuma tail checks", "[bounds]") {
    const AzumaReport r = martingale_experiment(0.5, 100, 0.2, 2000, InfoSchedule::constant(2.0), 11);
    CHECK_THAT(r.azuma_bound, WithinAbs(0.1353352832366127, 1e-15));
    CHECK(r.pass);
    CHECK(r.mean_within_5se);
    CHECK(r.max_abs_increment == 0.5);
    CHECK(r.all_pass());
    CHECK(to_json(r).dump() ==
          to_json(martingale_experiment(0.5, 100, 0.2, 2000, InfoSchedule::constant(2.0), 11)).dump());

    // Increments are at most 1/2, so |Y_n| >= 0.9 n never happens.
    const AzumaReport large = martingale_experiment(0.5, 20, 0.9, 1000, InfoSchedule::constant(2.0), 2);
    CHECK(large.empirical_tail == 0.0);
    CHECK(large.pass);

    const AzumaReport one = martingale_experiment(0.5, 1, 0.5, 1000, InfoSchedule::constant(2.0), 3);
    CHECK(one.azuma_bound >= std::exp(-0.5));

    CHECK(code_of([] { martingale_experiment(0.5, 10, 0.2, 999, InfoSchedule::constant(2.0), 1); }) ==
          ErrorCode::TooFewTraces);
    std::vector<MartingaleTrace> few(10);
    CHECK(code_of([&] { azuma_tail_check(few, 0.2); }) == ErrorCode::TooFewTraces);

    std::vector<MartingaleTrace> traces;
    CounterRng rng(4);
    for (int i = 0; i < 1000; ++i) {
        traces.push_back(martingale_run(0.25, 100, InfoSchedule::constant(2.0), rng));
    }
    const AzumaReport direct = azuma_tail_check(traces, 0.3);
    CHECK(direct.trials == 1000);
    CHECK(direct.pass);
}

TEST_CASE("Azuma bound holds across the parameter matrix", "[bounds]") {
    for (const double p : {0.25, 0.5, 0.75}) {
        for (const std::size_t n : {100u, 1000u}) {
            for (const double k : {0.1, 0.2, 0.3}) {
                const AzumaReport r = martingale_experiment(p, n, k, 2000, InfoSchedule::constant(2.0), 5);
                CHECK(r.all_pass());
            }
        }
    }
}
