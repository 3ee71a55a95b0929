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

#include <stdexcept>
#include <string>
#include <string_view>

namespace erasurelab {

enum class ErrorCode {
    DuplicateLabel,
    UnknownLabel,
    ArityMismatch,
    NonNormalized,
    NonHermitian,
    NonUnitTrace,
    NegativeEigenvalue,
    OverlappingParts,
    DimensionMismatch,
    LabelMismatch,
    SizeCap,
    NotProduct,
    NotOwnedByAlice,
    NotOwnedByBob,
    BudgetExhausted,
    PEqualsOne,
    InvalidProbability,
    RetransmitCapExceeded,
    NoEbitAvailable,
    InfeasibleSupply,
    IncompleteTrace,
    MissingE,
    OutOfValidityWindow,
    SnapshotsMissing,
    GridOutOfRange,
    InfoOutOfRange,
    TooFewTraces,
    InvalidArgument,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::NonNormalized: return "NonNormalized";
        case ErrorCode::NonHermitian: return "NonHermitian";
        case ErrorCode::NonUnitTrace: return "NonUnitTrace";
        case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
        case ErrorCode::OverlappingParts: return "OverlappingParts";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::LabelMismatch: return "LabelMismatch";
        case ErrorCode::SizeCap: return "SizeCap";
        case ErrorCode::NotProduct: return "NotProduct";
        case ErrorCode::NotOwnedByAlice: return "NotOwnedByAlice";
        case ErrorCode::NotOwnedByBob: return "NotOwnedByBob";
        case ErrorCode::BudgetExhausted: return "BudgetExhausted";
        case ErrorCode::PEqualsOne: return "PEqualsOne";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::RetransmitCapExceeded: return "RetransmitCapExceeded";
        case ErrorCode::NoEbitAvailable: return "NoEbitAvailable";
        case ErrorCode::InfeasibleSupply: return "InfeasibleSupply";
        case ErrorCode::IncompleteTrace: return "IncompleteTrace";
        case ErrorCode::MissingE: return "MissingE";
        case ErrorCode::OutOfValidityWindow: return "OutOfValidityWindow";
        case ErrorCode::SnapshotsMissing: return "SnapshotsMissing";
        case ErrorCode::GridOutOfRange: return "GridOutOfRange";
        case ErrorCode::InfoOutOfRange: return "InfoOutOfRange";
        case ErrorCode::TooFewTraces: return "TooFewTraces";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

} // namespace erasurelab
