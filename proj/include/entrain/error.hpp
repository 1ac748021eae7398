// Copyright 2026 The Entrain Authors
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

#ifndef ENTRAIN_ERROR_HPP_
#define ENTRAIN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace entrain {

enum class ErrorCode {
  kIoError,
  kMalformedHeader,
  kUnsupportedEncoding,
  kEmptyAudio,
  kAudioTooShort,
  kInvalidConfig,
  kMismatchedTracks,
  kDegenerateDistribution,
  kEmptyInput,
  kGridMismatch,
  kDegenerateSeries,
  kInsufficientOverlap,
  kOutOfOrderPoint,
  kLengthMismatch,
  kTooFewGroups,
  kAllValuesIdentical,
  kOutOfRangeN,
  kDegenerateGroup,
  kInvalidEffectSize,
  kParseError,
  kDuplicateRecord,
  kScoreOutOfRange,
  kInsufficientPairs,
  kInsufficientData,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the pipeline in particular) can record it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace entrain

#endif  // ENTRAIN_ERROR_HPP_
