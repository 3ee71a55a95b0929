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

#include <numbers>

#include "catch_amalgamated.hpp"
#include "erasurelab/density.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace erasurelab;
using Catch::Matchers::WithinAbs;

namespace {

DensityOp diagonal(const std::vector<double> &d) {
    std::vector<Label> labels;
    for (std::size_t n = d.size(); n > 1; n >>= 1) {
        labels.push_back(fresh_label());
    }
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    }
    return DensityOp(labels, m);
}

} // namespace

TEST_CASE("partial trace matches explicit index sums", "[density]") {
    const LabeledState s = random_pure_state(4, 41);
    const auto ids = s.ids();
    const oracle::Vec psi = oracle::amplitudes(s);
    const std::vector<std::vector<std::size_t>> keeps{{0}, {3}, {1, 2}, {2, 0}, {3, 1, 0}, {0, 1, 2, 3}};
    for (const auto &keep : keeps) {
        std::vector<Label> labels;
        for (const std::size_t q : keep) {
            labels.push_back(ids[q]);
        }
        const DensityOp rho = partial_trace(s, labels);
        CHECK(rho.labels() == labels);
        CHECK((rho.matrix() - oracle::partial_trace(psi, 4, keep)).cwiseAbs().maxCoeff() < 1e-12);
    }
    // Tracing a density operator further agrees with tracing the state at once.
    const DensityOp rho = partial_trace(s, {ids[0], ids[1], ids[3]});
    const DensityOp nested = partial_trace(rho, std::vector<Label>{ids[3], ids[0]});
    CHECK((nested.matrix() - oracle::partial_trace(psi, 4, {3, 0})).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("entropies of known states", "[density]") {
    // H(1/4, 3/4) = 2 - (3/4) log2 3.
    CHECK_THAT(entropy(diagonal({0.25, 0.75})), WithinAbs(0.8112781244591328, 1e-12));
    CHECK_THAT(entropy(diagonal({0.25, 0.25, 0.25, 0.25})), WithinAbs(2.0, 1e-12));
    CHECK_THAT(entropy(diagonal({1.0, 0.0})), WithinAbs(0.0, 1e-15));

    const LabeledState bell = make_bell();
    const auto ids = bell.ids();
    CHECK_THAT(entropy_of(bell, std::vector<Label>{ids[0]}), WithinAbs(1.0, 1e-12));
    CHECK_THAT(entropy_of(bell, ids), WithinAbs(0.0, 1e-12));
    CHECK_THAT(mutual_information(bell, {ids[0]}, {ids[1]}), WithinAbs(2.0, 1e-12));
    CHECK_THAT(coherent_information(bell, {ids[0]}, {ids[1]}), WithinAbs(1.0, 1e-12));

    const LabeledState ghz = make_ghz();
    const auto g = ghz.ids();
    CHECK_THAT(mutual_information(ghz, {g[0]}, {g[1]}), WithinAbs(1.0, 1e-12));
    CHECK_THAT(coherent_information(ghz, {g[0]}, {g[1]}), WithinAbs(0.0, 1e-12));

    const LabeledState product = tensor(random_pure_state(1, 1), random_pure_state(1, 2));
    const auto p = product.ids();
    CHECK_THAT(mutual_information(product, {p[0]}, {p[1]}), WithinAbs(0.0, 1e-12));
}

TEST_CASE("average subsystem entropy of random two-qubit states", "[density]") {
    // Mean entanglement entropy of a Haar-random pure state on C^2 (x) C^2 is
    // (1/3)/ln 2 bits.
    CounterRng rng(2024);
    double sum = 0.0, sum_sq = 0.0;
    const int samples = 4000;
    for (int i = 0; i < samples; ++i) {
        const LabeledState s = random_pure_state({fresh(Party::Alice), fresh(Party::Bob)}, rng);
        const double h = entropy_of(s, std::vector<Label>{s.ids()[0]});
        sum += h;
        sum_sq += h * h;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
    CHECK(std::abs(mean - 0.4808983469629878) < 5.0 * se);
}

TEST_CASE("library entropies agree with the oracle on random marginals", "[density]") {
    const LabeledState s = random_pure_state(5, 77);
    const auto ids = s.ids();
    const oracle::Vec psi = oracle::amplitudes(s);
    for (const std::vector<std::size_t> &part : {std::vector<std::size_t>{0}, {1, 4}, {0, 2, 3}, {1, 2, 3, 4}}) {
        std::vector<Label> labels;
        for (const std::size_t q : part) {
            labels.push_back(ids[q]);
        }
        const double h = entropy_of(s, labels);
        CHECK_THAT(h, WithinAbs(oracle::entropy(psi, 5, part), 1e-10));
        CHECK(h >= 0.0);
        CHECK(h <= static_cast<double>(labels.size()) + 1e-9);
    }
}

TEST_CASE("density operator validation and eigenvalue clamp", "[density]") {
    const std::vector<Label> one{fresh_label()};
    ComplexMatrix m(2, 2);
    m << 0.5, 0.1, 0.2, 0.5;
    CHECK(code_of([&] { DensityOp(one, m); }) == ErrorCode::NonHermitian);
    m << 0.6, 0.0, 0.0, 0.6;
    CHECK(code_of([&] { DensityOp(one, m); }) == ErrorCode::NonUnitTrace);
    m << 1.1, 0.0, 0.0, -0.1;
    CHECK(code_of([&] { DensityOp(one, m); }) == ErrorCode::NegativeEigenvalue);
    m << 1.0, 0.0, 0.0, 0.0;
    CHECK(code_of([&] { DensityOp(one, ComplexMatrix::Identity(4, 4) / 4.0); }) == ErrorCode::DimensionMismatch);

    // Rounding-sized negative eigenvalues are clamped, not rejected.
    m << 1.0 + 1e-13, 0.0, 0.0, -1e-13;
    const DensityOp rho(one, m);
    CHECK_THAT(entropy(rho), WithinAbs(0.0, 1e-12));
}

TEST_CASE("overlapping parts are rejected", "[density]") {
    const LabeledState s = random_pure_state(3, 9);
    const auto ids = s.ids();
    CHECK(code_of([&] { mutual_information(s, {ids[0], ids[1]}, {ids[1]}); }) == ErrorCode::OverlappingParts);
    CHECK(code_of([&] { coherent_information(s, {ids[2]}, {ids[2]}); }) == ErrorCode::OverlappingParts);
    CHECK(code_of([&] { entropy_of(s, std::vector<Label>{fresh_label()}); }) == ErrorCode::UnknownLabel);
}

TEST_CASE("fidelity and trace distance", "[density]") {
    const SystemLabel q = fresh(Party::Alice);
    const DensityOp zero = DensityOp::projector(basis_state({q}, 0));
    const DensityOp plus = DensityOp::projector(prepare_message(std::numbers::pi / 2, 0.0, q));
    CHECK_THAT(trace_distance(zero, plus), WithinAbs(1.0 / std::sqrt(2.0), 1e-12));
    CHECK_THAT(fidelity(zero, plus), WithinAbs(1.0 / std::sqrt(2.0), 1e-12));
    CHECK_THAT(fidelity(zero, zero), WithinAbs(1.0, 1e-12));
    CHECK_THAT(trace_distance(zero, zero), WithinAbs(0.0, 1e-12));

    const DensityOp mixed(std::vector<Label>{q.id}, ComplexMatrix::Identity(2, 2) / 2.0);
    CHECK_THAT(fidelity(zero, mixed), WithinAbs(std::sqrt(0.5), 1e-12));
    CHECK_THAT(fidelity(mixed, zero), WithinAbs(std::sqrt(0.5), 1e-12));
    CHECK_THAT(trace_distance(zero, mixed), WithinAbs(0.5, 1e-12));

    // Operators on the same labels in a different order are aligned first.
    const LabeledState s = random_pure_state(2, 12);
    const auto ids = s.ids();
    const DensityOp a = DensityOp::projector(s);
    const DensityOp b = reorder(a, std::vector<Label>{ids[1], ids[0]});
    CHECK_THAT(fidelity(a, b), WithinAbs(1.0, 1e-9));
    CHECK_THAT(trace_distance(a, b), WithinAbs(0.0, 1e-9));
    CHECK_THAT(fidelity_with_pure(a, s), WithinAbs(1.0, 1e-12));

    const DensityOp other = DensityOp::projector(random_pure_state(2, 13));
    CHECK(code_of([&] { fidelity(a, other); }) == ErrorCode::LabelMismatch);
    CHECK(code_of([&] { trace_distance(a, zero); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("relabel renames without touching the matrix", "[density]") {
    const LabeledState s = random_pure_state(2, 14);
    const auto ids = s.ids();
    const DensityOp rho = partial_trace(s, std::vector<Label>{ids[0]});
    const Label fresh_id = fresh_label();
    const DensityOp renamed = relabel(rho, std::vector<Label>{ids[0]}, std::vector<Label>{fresh_id});
    CHECK(renamed.labels() == std::vector<Label>{fresh_id});
    CHECK(renamed.matrix() == rho.matrix());
}
