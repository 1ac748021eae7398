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

#include "entrain/error.hpp"

namespace entrain {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kAudioTooShort: return "AudioTooShort";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kMismatchedTracks: return "MismatchedTracks";
    case ErrorCode::kDegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kDegenerateSeries: return "DegenerateSeries";
    case ErrorCode::kInsufficientOverlap: return "InsufficientOverlap";
    case ErrorCode::kOutOfOrderPoint: return "OutOfOrderPoint";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooFewGroups: return "TooFewGroups";
    case ErrorCode::kAllValuesIdentical: return "AllValuesIdentical";
    case ErrorCode::kOutOfRangeN: return "OutOfRangeN";
    case ErrorCode::kDegenerateGroup: return "DegenerateGroup";
    case ErrorCode::kInvalidEffectSize: return "InvalidEffectSize";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateRecord: return "DuplicateRecord";
    case ErrorCode::kScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::kInsufficientPairs: return "InsufficientPairs";
    case ErrorCode::kInsufficientData: return "InsufficientData";
  }
  return "Unknown";
}

}  // namespace entrain
