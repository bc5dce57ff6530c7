// Copyright 2026 The roi-lab Authors
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

namespace roilab {

enum class ErrorCode {
    NotHermitian,
    NotPsd,
    DimensionMismatch,
    NotEffect,
    NotState,
    OutOfRange,
    InvalidPovm,
    InvalidInstrument,
    InvalidJointPovm,
    UnknownOutcome,
    NoConvergence,
    MissingSetting,
    InvalidStats,
    InvalidModel,
    InvalidBranch,
    EmptyGrid,
    UndefinedCorrelation,
    ConfigError,
    IoError,
    ParseError,
    UnknownDataset,
    TheoryMismatch,
    InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPsd: return "NotPSD";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotEffect: return "NotEffect";
    case ErrorCode::NotState: return "NotState";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::InvalidInstrument: return "InvalidInstrument";
    case ErrorCode::InvalidJointPovm: return "InvalidJointPovm";
    case ErrorCode::UnknownOutcome: return "UnknownOutcome";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MissingSetting: return "MissingSetting";
    case ErrorCode::InvalidStats: return "InvalidStats";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidBranch: return "InvalidBranch";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::UndefinedCorrelation: return "UndefinedCorrelation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownDataset: return "UnknownDataset";
    case ErrorCode::TheoryMismatch: return "TheoryMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind rather than on message text.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace roilab
