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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace streampcq {

enum class ErrorCode {
  // bitstream
  kEmptyStream,
  kTruncatedUnit,
  kBitstreamExhausted,
  kMalformedExpGolomb,
  kProfileMismatch,
  kInvalidProfile,
  kMissingParameterSet,
  kNonPositivePointCount,
  kMissingField,
  kInconsistentTbpp,
  // model
  kInvalidParams,
  kDivisionByZeroMos,
  // calibration
  kTooFewPoints,
  kEmptyCloud,
  kDegenerateDesign,
  kMissingReferenceTc,
  kTooFewTqpLevels,
  kTooFewContents,
  kNonConvergence,
  kDuplicateRecord,
  // subjective
  kZeroVariance,
  kTooFewObservers,
  kDegenerateRange,
  kEmptyStimulus,
  // evaluation
  kLengthMismatch,
  kEmptyTestSet,
  kTooFewSamples,
  kMismatchedStimuli,
  // generic I/O
  kInputError,
  kParseError,
  kConfigError,
};

// Coarse grouping used for process exit codes.
enum class ErrorCategory { kInput, kParse, kConfig, kNumeric };

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return error_category(code_); }
  // Byte offset into the input stream, when the failure has one.
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace streampcq
