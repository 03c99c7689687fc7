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

#ifndef LARYNGO_ERROR_HPP_
#define LARYNGO_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace laryngo {

enum class ErrorCode {
  // input / configuration
  UnreadableFile,
  UnsupportedFormat,
  MissingMetadata,
  MissingFrameEntry,
  BadParams,
  BadConfig,
  WriteFailure,
  ClipTooShort,
  TooFewFrames,
  SequenceTooShort,
  AlphaOutOfRange,
  ScorerFailure,
  // data degeneracy
  NoEligibleSegment,
  MaskTooSmall,
  DegenerateMidline,
  LevelOutsideMask,
  FitDegenerate,
  CoincidentPoints,
  AllFramesDegenerate,
  InsufficientFrames,
  AlignmentMismatch,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for a failure of this kind: 2 for input or
/// configuration problems, 3 when the data itself is degenerate.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace laryngo

#endif  // LARYNGO_ERROR_HPP_
