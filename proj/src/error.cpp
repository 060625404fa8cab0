// Copyright 2026 The streamPCQ Authors. All Rights Reserved.
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

#include "streampcq/error.hpp"

namespace streampcq {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyStream: return "EmptyStream";
    case ErrorCode::kTruncatedUnit: return "TruncatedUnit";
    case ErrorCode::kBitstreamExhausted: return "BitstreamExhausted";
    case ErrorCode::kMalformedExpGolomb: return "MalformedExpGolomb";
    case ErrorCode::kProfileMismatch: return "ProfileMismatch";
    case ErrorCode::kInvalidProfile: return "InvalidProfile";
    case ErrorCode::kMissingParameterSet: return "MissingParameterSet";
    case ErrorCode::kNonPositivePointCount: return "NonPositivePointCount";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kInconsistentTbpp: return "InconsistentTbpp";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kDivisionByZeroMos: return "DivisionByZeroMos";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kDegenerateDesign: return "DegenerateDesign";
    case ErrorCode::kMissingReferenceTc: return "MissingReferenceTc";
    case ErrorCode::kTooFewTqpLevels: return "TooFewTqpLevels";
    case ErrorCode::kTooFewContents: return "TooFewContents";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kDuplicateRecord: return "DuplicateRecord";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kTooFewObservers: return "TooFewObservers";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kEmptyStimulus: return "EmptyStimulus";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyTestSet: return "EmptyTestSet";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kMismatchedStimuli: return "MismatchedStimuli";
    case ErrorCode::kInputError: return "InputError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyStream:
    case ErrorCode::kTruncatedUnit:
    case ErrorCode::kBitstreamExhausted:
    case ErrorCode::kMalformedExpGolomb:
    case ErrorCode::kProfileMismatch:
    case ErrorCode::kMissingParameterSet:
    case ErrorCode::kParseError:
      return ErrorCategory::kParse;
    case ErrorCode::kInvalidProfile:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kConfigError:
      return ErrorCategory::kConfig;
    case ErrorCode::kNonPositivePointCount:
    case ErrorCode::kMissingField:
    case ErrorCode::kInconsistentTbpp:
    case ErrorCode::kDuplicateRecord:
    case ErrorCode::kMissingReferenceTc:
    case ErrorCode::kEmptyCloud:
    case ErrorCode::kTooFewPoints:
    case ErrorCode::kMismatchedStimuli:
    case ErrorCode::kInputError:
      return ErrorCategory::kInput;
    default:
      return ErrorCategory::kNumeric;
  }
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      offset_(offset) {}

}  // namespace streampcq
