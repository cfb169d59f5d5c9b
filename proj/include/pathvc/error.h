// Copyright (c) 2026 pathvc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PATHVC_ERROR_H_
#define PATHVC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathvc {

enum class ErrorCode {
  kIoError,
  kUnsupportedFormat,
  kCorruptHeader,
  kInvalidArgument,
  kAllSilent,
  kTooShort,
  kDimensionMismatch,
  kEmptySequence,
  kInvalidPath,
  kEmptyControlSet,
  kEmptyInput,
  kMixedSpeakers,
  kEmptyReference,
  kSpeakerSetMismatch,
  kZeroVector,
  kUnknownSpeaker,
  kUnknownStage,
  kEmptyScores,
  kLengthMismatch,
  kZeroVariance,
  kOutOfScale,
  kInvalidIncrement,
  kParseError,
  kValidationError,
  kWrongCount,
  kEmptySelection,
  kMissingInput,
  kNumericFailure,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure in the toolkit is reported through this exception; the code
// identifies the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pathvc

#endif  // PATHVC_ERROR_H_
