// Copyright 2026 The qlbw developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qlbw {

enum class ErrorCode {
  MalformedJson,
  UnknownBoundaryKind,
  BoundsOutOfRange,
  SeparationViolation,
  NonPowerOfTwoExtent,
  IndexOutOfRange,
  MeasureNotTerminal,
  NonUnitaryGate,
  InvalidDimension,
  ConstantOutOfRange,
  QubitCountMismatch,
  MeasureInUnitaryApply,
  InsufficientScratch,
  PositionInsideObstacle,
  PositionOutOfRange,
  UnresolvableReflection,
  NormDrift,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::UnknownBoundaryKind: return "UnknownBoundaryKind";
    case ErrorCode::BoundsOutOfRange: return "BoundsOutOfRange";
    case ErrorCode::SeparationViolation: return "SeparationViolation";
    case ErrorCode::NonPowerOfTwoExtent: return "NonPowerOfTwoExtent";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MeasureNotTerminal: return "MeasureNotTerminal";
    case ErrorCode::NonUnitaryGate: return "NonUnitaryGate";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::ConstantOutOfRange: return "ConstantOutOfRange";
    case ErrorCode::QubitCountMismatch: return "QubitCountMismatch";
    case ErrorCode::MeasureInUnitaryApply: return "MeasureInUnitaryApply";
    case ErrorCode::InsufficientScratch: return "InsufficientScratch";
    case ErrorCode::PositionInsideObstacle: return "PositionInsideObstacle";
    case ErrorCode::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::UnresolvableReflection: return "UnresolvableReflection";
    case ErrorCode::NormDrift: return "NormDrift";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qlbw
