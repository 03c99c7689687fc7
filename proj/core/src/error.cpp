// Copyright (c) 2026 The laryngo Authors
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


#include "laryngo/error.hpp"

namespace laryngo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MissingMetadata: return "MissingMetadata";
    case ErrorCode::MissingFrameEntry: return "MissingFrameEntry";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::WriteFailure: return "WriteFailure";
    case ErrorCode::ClipTooShort: return "ClipTooShort";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::ScorerFailure: return "ScorerFailure";
    case ErrorCode::NoEligibleSegment: return "NoEligibleSegment";
    case ErrorCode::MaskTooSmall: return "MaskTooSmall";
    case ErrorCode::DegenerateMidline: return "DegenerateMidline";
    case ErrorCode::LevelOutsideMask: return "LevelOutsideMask";
    case ErrorCode::FitDegenerate: return "FitDegenerate";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::AllFramesDegenerate: return "AllFramesDegenerate";
    case ErrorCode::InsufficientFrames: return "InsufficientFrames";
    case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoEligibleSegment:
    case ErrorCode::MaskTooSmall:
    case ErrorCode::DegenerateMidline:
    case ErrorCode::LevelOutsideMask:
    case ErrorCode::FitDegenerate:
    case ErrorCode::CoincidentPoints:
    case ErrorCode::AllFramesDegenerate:
    case ErrorCode::InsufficientFrames:
    case ErrorCode::AlignmentMismatch:
      return 3;
    default:
      return 2;
  }
}

}  // namespace laryngo
