/*
 * Copyright 2026 The aiou Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AIOU_ERROR_H_
#define AIOU_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace aiou {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidMap,
  kInvalidMask,
  kDegenerateMap,
  kDimensionMismatch,
  kDuplicateName,
  kIoFailure,
  kBadMagic,
  kUnsupportedVersion,
  kTruncatedRecord,
  kMalformedRecord,
  kMissingColumn,
  kNonBinaryLabel,
  kDuplicateImageId,
  kUnknownImage,
  kNoMatchedImages,
  kUnknownAttribute,
  kEmptySet,
  kUndefinedMcc,
  kAllGroupsExcluded,
  kNoPositives,
  kDegenerateInput,
  kUnattainableTarget,
  kInfeasibleCap,
};

// Stable identifier for an error code, e.g. "DegenerateMap".
std::string_view ErrorName(ErrorCode code);

// All library failures are reported as aiou::Error. what() is
// "<ErrorName>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(ErrorName(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aiou

#endif  // AIOU_ERROR_H_
